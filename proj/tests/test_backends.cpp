#include <catch2/catch_amalgamated.hpp>

#include "ampsamp/pathsum.hpp"
#include "ampsamp/stabdecomp.hpp"
#include "ampsamp/statevector.hpp"
#include "ampsamp/verify.hpp"

using namespace ampsamp;

namespace {

double max_backend_gap(const Circuit& c) {
    StatevectorOracle sv(c);
    PathSumOracle ps(c);
    double worst = 0;
    const std::uint64_t dim = std::uint64_t{1} << c.n;
    for (int t = 0; t <= c.m(); ++t)
        for (std::uint64_t x = 0; x < dim; ++x) {
            BitString b(x, c.n);
            worst = std::max(worst, std::abs(sv.amplitude(t, b) - ps.amplitude(t, b)));
        }
    return worst;
}

} // namespace

TEST_CASE("statevector matches path sum on fixed circuits") {
    CHECK(max_backend_gap(parse_circuit_file("data/bell.qc")) < 1e-12);
    CHECK(max_backend_gap(parse_circuit_file("data/ghz3.qc")) < 1e-12);
    CHECK(max_backend_gap(parse_circuit_file("data/rot.qc")) < 1e-12);
}

TEST_CASE("statevector matches path sum on random circuits") {
    Rng rng(42);
    for (int i = 0; i < 15; ++i) {
        Circuit c = detail::random_circuit(rng, false);
        CHECK(max_backend_gap(c) < 1e-9);
    }
}

TEST_CASE("stabilizer engine is phase exact on Clifford circuits") {
    Rng rng(7);
    static const std::vector<std::string> one = {"h", "s", "sdg", "x", "y", "z"};
    static const std::vector<std::string> two = {"cx", "cz", "swap"};
    for (int i = 0; i < 25; ++i) {
        Circuit c;
        c.n = 2 + static_cast<int>(rng() % 3);
        for (int t = 0; t < 8; ++t) {
            if ((rng() & 1) && c.n >= 2)
                c.gates.push_back(make_gate(two[rng() % two.size()],
                                            detail::random_support(c.n, 2, rng)));
            else
                c.gates.push_back(make_gate(one[rng() % one.size()],
                                            detail::random_support(c.n, 1, rng)));
        }
        const Vec sv = statevector(c);
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << c.n); ++x) {
            const cplx a = clifford_amplitude(c, BitString(x, c.n));
            CHECK(std::abs(a - sv[static_cast<Eigen::Index>(x)]) < 1e-9);
        }
    }
}

TEST_CASE("clifford recognition accepts phase conventions and rejects T") {
    Gate g = make_gate("h", {0});
    g.matrix *= std::polar(1.0, 1.234); // any global phase is still Clifford
    CHECK(is_clifford_gate(g));
    CHECK(is_clifford_gate(make_gate("cx", {0, 1})));
    CHECK_FALSE(is_clifford_gate(make_gate("t", {0})));
    CHECK_FALSE(is_clifford_gate(make_gate("rz", {0}, 0.3)));
}

TEST_CASE("stabilizer decomposition doubles terms per T") {
    Circuit c = parse_circuit("qubits 2\nh 0\nt 0\ncx 0 1\ntdg 1\nh 1\n");
    auto decomp = stabilizer_decompose(c);
    REQUIRE(decomp.size() == static_cast<std::size_t>(c.m()) + 1);
    CHECK(decomp[0].size() == 1);
    CHECK(decomp[2].size() == 2);
    CHECK(decomp[4].size() == 4);
    // every clifford circuit in the decomposition uses the Clifford set only
    for (const auto& prefix : decomp)
        for (const auto& term : prefix)
            for (const auto& g : term.clifford.gates) CHECK(is_clifford_gate(g));
}

TEST_CASE("stabdecomp oracle agrees with statevector on Clifford+T") {
    Circuit c = parse_circuit("qubits 2\nh 0\nt 0\ncx 0 1\ntdg 1\nh 1\ns 0\nt 0\n");
    StatevectorOracle sv(c);
    StabDecompOracle sd(c);
    for (int t = 0; t <= c.m(); ++t)
        for (std::uint64_t x = 0; x < 4; ++x) {
            BitString b(x, 2);
            CHECK(std::abs(sv.amplitude(t, b) - sd.amplitude(t, b)) < 1e-12);
        }
    CHECK(sd.term_count() == 8); // three T gates
}

TEST_CASE("t-count cap enforced") {
    Circuit c;
    c.n = 1;
    for (int i = 0; i < kMaxTCount + 1; ++i) c.gates.push_back(make_gate("t", {0}));
    CHECK_THROWS_AS(stabilizer_decompose(c), guard_error);
}

TEST_CASE("permutation circuits evaluated exhaustively") {
    // X/CX/SWAP-only circuits: the state is always one basis vector
    Rng rng(11);
    for (int i = 0; i < 10; ++i) {
        Circuit c;
        c.n = 6;
        for (int t = 0; t < 12; ++t) {
            const int kind = static_cast<int>(rng() % 3);
            if (kind == 0)
                c.gates.push_back(make_gate("x", detail::random_support(c.n, 1, rng)));
            else
                c.gates.push_back(make_gate(kind == 1 ? "cx" : "swap",
                                            detail::random_support(c.n, 2, rng)));
        }
        // track the basis state by permutation application
        BitString x(0, c.n);
        for (const auto& g : c.gates) x = apply_permutation_gate(g, x).first;
        const Vec sv = statevector(c);
        for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << c.n); ++idx) {
            const double expected = idx == x.bits ? 1.0 : 0.0;
            CHECK(std::abs(std::abs(sv[static_cast<Eigen::Index>(idx)]) - expected) < 1e-12);
        }
    }
}

TEST_CASE("marginal probabilities are consistent") {
    Circuit c = parse_circuit_file("data/ghz3.qc");
    StatevectorOracle sv(c);
    // chain rule consistency: summing the j+1 marginals recovers the j ones
    for (int j = 0; j < 3; ++j)
        for (std::uint64_t y = 0; y < (std::uint64_t{1} << j); ++y) {
            const double pj = sv.marginal_probability(c.m(), y, j);
            const double split = sv.marginal_probability(c.m(), y, j + 1) +
                                 sv.marginal_probability(c.m(), y | (std::uint64_t{1} << j), j + 1);
            CHECK(std::abs(pj - split) < 1e-12);
        }
    CHECK(std::abs(sv.marginal_probability(c.m(), 0, 0) - 1.0) < 1e-12);
    PathSumOracle ps(c);
    CHECK_FALSE(ps.supports_marginals());
    CHECK_THROWS_AS(ps.marginal_probability(3, 0, 1), guard_error);
}

TEST_CASE("oracle call accounting") {
    Circuit c = parse_circuit_file("data/bell.qc");
    StatevectorOracle sv(c);
    CHECK(sv.total_calls() == 0);
    sv.amplitude(2, BitString::parse("00"));
    sv.amplitude(2, BitString::parse("11"));
    CHECK(sv.total_calls() == 2);
    CHECK(sv.call_counts()[2] == 2);
    sv.reset_call_counts();
    CHECK(sv.total_calls() == 0);
}
