#include <catch2/catch_amalgamated.hpp>

#include "ampsamp/magicratio.hpp"
#include "ampsamp/verify.hpp"

using namespace ampsamp;

TEST_CASE("hamiltonian parsing and locality") {
    SparseHamiltonian h = parse_hamiltonian_file("data/tfim2.ham");
    CHECK(h.n == 2);
    CHECK(h.k == 1);
    CHECK(check_locality(h, 1));
    CHECK_FALSE(check_locality(h, 0));
    CHECK(h.entry(0, 0) == cplx{-1.0, 0.0});  // ZZ diagonal on |00>
    CHECK(h.entry(1, 0) == cplx{-1.0, 0.0});  // X on qubit 0
    CHECK_THROWS_AS(parse_hamiltonian("qubits 2\nterm 0,1 XI\n"), guard_error);
    CHECK_THROWS_AS(parse_hamiltonian("qubits 2\nterm 1,0 XYZ\n"), parse_error);
}

TEST_CASE("exact ground state of -X") {
    SparseHamiltonian h;
    h.n = 1;
    detail::add_pauli_term(h, {-1.0, 0.0}, "X");
    GroundStateResult gs = exact_ground_state(h);
    CHECK(gs.e0 == Catch::Approx(-1.0));
    CHECK(gs.gap == Catch::Approx(2.0));
    CHECK(std::abs(std::abs(gs.psi[0]) - 1.0 / std::numbers::sqrt2) < 1e-12);
    CHECK(sensitivity(h, gs.psi) == Catch::Approx(1.0));

    // the CLI example values: gamma = 2, s = 1, N = 2, bound holds
    ChainConfig cfg;
    cfg.k = 1;
    cfg.x_in = BitString(0, 1);
    GapBoundReport rep = gap_bound_check(h, cfg);
    CHECK(rep.gamma == Catch::Approx(2.0));
    CHECK(rep.s == Catch::Approx(1.0));
    CHECK(rep.big_n == 2);
    CHECK(rep.holds);
}

TEST_CASE("degenerate ground states are rejected") {
    SparseHamiltonian h;
    h.n = 1;
    detail::add_pauli_term(h, {0.0, 0.0}, "I"); // zero operator: fully degenerate
    h.add_entry(0, 0, 1e-30);
    CHECK_THROWS_AS(exact_ground_state(h), guard_error);
}

TEST_CASE("proposal distribution is uniform over <=k flips") {
    Rng rng(13);
    const int n = 4, k = 2;
    const std::uint64_t total = proposal_count(n, k);
    CHECK(total == 1 + 4 + 6);
    std::map<std::uint64_t, int> counts;
    const int draws = 110000;
    for (int i = 0; i < draws; ++i) ++counts[propose(BitString(0b0101, n), k, rng).bits];
    CHECK(counts.size() == total);
    for (const auto& [y, c] : counts)
        CHECK(std::abs(c / double(draws) - 1.0 / double(total)) < 0.01);
}

TEST_CASE("chain matrix structure on the TFIM") {
    SparseHamiltonian h = parse_hamiltonian_file("data/tfim2.ham");
    ChainConfig cfg;
    cfg.k = 1;
    cfg.x_in = BitString(0, 2);
    GapBoundReport rep = gap_bound_check(h, cfg);
    CHECK(rep.chain.row_sum_err < 1e-12);
    CHECK(rep.chain.detailed_balance_err < 1e-10);
    CHECK(rep.chain.min_eigenvalue >= -1e-12);   // laziness: nonnegative spectrum
    CHECK(rep.chain.P.diagonal().minCoeff() >= 0.5);
    CHECK(rep.lambda1 < 1.0);
    CHECK(rep.holds);
    CHECK(rep.mixing_time > 0);
    CHECK(rep.runtime_estimate > 0);
}

TEST_CASE("metropolis chain reaches the stationary law") {
    SparseHamiltonian h = parse_hamiltonian_file("data/tfim2.ham");
    GroundStateResult gs = exact_ground_state(h);
    ExactDiagOracle oracle(h.n, gs.psi);
    std::map<std::uint64_t, int> counts;
    const int chains = 3000;
    for (int i = 0; i < chains; ++i) {
        ChainConfig cfg;
        cfg.k = 1;
        cfg.x_in = BitString(0, 2);
        cfg.steps = 300;
        cfg.seed = derive_seed(99, static_cast<std::uint64_t>(i));
        ++counts[run_chain(oracle, cfg).first.bits];
    }
    double tv = 0;
    for (std::uint64_t x = 0; x < 4; ++x)
        tv += std::abs(counts[x] / double(chains) - oracle.pi(x));
    CHECK(tv / 2.0 < 0.05);
}

TEST_CASE("stoquastic check and bound") {
    SparseHamiltonian h = parse_hamiltonian_file("data/tfim2.ham");
    StoquasticReport rep = stoquastic_check_and_bound(h);
    CHECK(rep.is_stoquastic);
    GroundStateResult gs = exact_ground_state(h);
    CHECK(sensitivity(h, gs.psi) <= rep.bound + 1e-9);

    SparseHamiltonian pos;
    pos.n = 1;
    detail::add_pauli_term(pos, {1.0, 0.0}, "X"); // positive off-diagonal
    CHECK_FALSE(stoquastic_check_and_bound(pos).is_stoquastic);
}

TEST_CASE("magic-ratio parsing and structure") {
    const std::string text =
        "qubits 1\n"
        "family\n"
        "state 0 0.6,0 1 0.8,0\n";
    MagicRatioHamiltonian mr = parse_magic_ratio(text);
    CHECK(mr.n == 1);
    CHECK(mr.m() == 1);
    CHECK(magic_ratio(mr, BitString::parse("0"), BitString::parse("1")) ==
          Catch::Approx(0.64 / 0.36));
    MagicRatioReport rep = verify_magic_ratio_structure(mr);
    CHECK(rep.disjoint_supports);
    CHECK(rep.frustration_free);
    CHECK(rep.sensitivity_le_m);

    CHECK_THROWS_AS(parse_magic_ratio("qubits 1\nfamily\nstate 0 1,0\nstate 0 1,0\n"),
                    parse_error); // overlapping supports
    CHECK_THROWS_AS(parse_magic_ratio("qubits 1\nfamily\nstate 0 0.5,0\n"),
                    parse_error); // not normalized
}

TEST_CASE("magic-ratio oracle composes ratios along paths") {
    Rng rng(31);
    MagicRatioHamiltonian mr = detail::random_magic_ratio(rng);
    MagicRatioOracle oracle(mr);
    GroundStateResult gs = exact_ground_state(to_hamiltonian(mr));
    const std::uint64_t dim = std::uint64_t{1} << mr.n;
    for (std::uint64_t x = 0; x < dim; ++x)
        for (std::uint64_t y = 0; y < dim; ++y) {
            const double expected = std::norm(gs.psi[static_cast<Eigen::Index>(y)]) /
                                    std::norm(gs.psi[static_cast<Eigen::Index>(x)]);
            CHECK(oracle.ratio(BitString(x, mr.n), BitString(y, mr.n)) ==
                  Catch::Approx(expected).margin(1e-8));
        }
}

TEST_CASE("sensitivity error cases") {
    SparseHamiltonian h;
    h.n = 1;
    h.add_entry(0, 1, {0.5, 0});
    h.add_entry(1, 0, {0.5, 0});
    Vec psi = Vec::Zero(2); // vanishes everywhere off-diagonals connect
    CHECK_THROWS_AS(sensitivity(h, psi), guard_error);

    SparseHamiltonian diag;
    diag.n = 1;
    diag.add_entry(0, 0, {1.0, 0});
    Vec any = Vec::Ones(2);
    CHECK(sensitivity(diag, any) == 0.0);
}
