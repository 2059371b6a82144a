#include <catch2/catch_amalgamated.hpp>

#include "ampsamp/sampler.hpp"
#include "ampsamp/verify.hpp"

using namespace ampsamp;

TEST_CASE("induced sampler law equals the exact law on fixed circuits") {
    for (const char* path : {"data/bell.qc", "data/ghz3.qc", "data/rot.qc"}) {
        Circuit c = parse_circuit_file(path);
        StatevectorOracle proto(c);
        const Distribution ref = reference_distribution(c);
        CHECK(tv_distance(induced_sampler_distribution(c, proto, true), ref).l1 < 1e-12);
        CHECK(tv_distance(induced_sampler_distribution(c, proto, false), ref).l1 < 1e-12);
    }
}

TEST_CASE("induced sampler law equals the exact law on adaptive circuits") {
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        Circuit c = detail::random_circuit(rng, true);
        StatevectorOracle proto(c);
        const Distribution ref = reference_distribution(c);
        CHECK(tv_distance(induced_sampler_distribution(c, proto, true), ref).l1 < 1e-9);
    }
}

TEST_CASE("gate-by-gate trace shortcuts") {
    Circuit c = parse_circuit_file("data/bell.qc");
    StatevectorOracle o(c);
    Rng rng(9);
    SampleTrace tr = gate_by_gate_sample(c, o, rng);
    REQUIRE(tr.steps.size() == 2);
    CHECK(tr.steps[0] == StepKind::Resample);         // H
    CHECK(tr.steps[1] == StepKind::PermutationApply); // CX
    CHECK(tr.total_prob_evals == 2);                  // 2 evals for the H, 0 for the CX

    // pure-diagonal circuit: zero evaluations, output stays 0..0
    Circuit diag = parse_circuit("qubits 2\nrz 0 0.3\ncz 0 1\ns 1\n");
    StatevectorOracle od(diag);
    SampleTrace td = gate_by_gate_sample(diag, od, rng);
    CHECK(td.total_prob_evals == 0);
    CHECK(td.output.str() == "00");
}

TEST_CASE("qubit-by-qubit sampling matches the output law") {
    Circuit c = parse_circuit_file("data/bell.qc");
    StatevectorOracle o(c);
    Rng rng(21);
    std::map<std::string, int> counts;
    const int shots = 4000;
    for (int i = 0; i < shots; ++i) ++counts[qubit_by_qubit_sample(c, o, rng).str()];
    CHECK(counts.count("01") == 0);
    CHECK(counts.count("10") == 0);
    CHECK(std::abs(counts["00"] / double(shots) - 0.5) < 0.05);

    PathSumOracle ps(c);
    CHECK_THROWS_AS(qubit_by_qubit_sample(c, ps, rng), guard_error);
}

TEST_CASE("tv distance") {
    Distribution a, b;
    a.n = b.n = 2;
    a.add(0, 0.5);
    a.add(3, 0.5);
    b.add(0, 0.25);
    b.add(1, 0.75);
    TvReport r = tv_distance(a, b);
    CHECK(r.l1 == Catch::Approx(1.5));
    CHECK(r.tv == Catch::Approx(0.75));
    CHECK(tv_distance(a, a).l1 == 0.0);
}

TEST_CASE("chi-square goodness of fit") {
    Distribution ref;
    ref.n = 2;
    ref.add(0, 0.5);
    ref.add(3, 0.5);
    Rng rng(5);
    std::vector<BitString> good, bad;
    for (int i = 0; i < 2000; ++i) {
        good.emplace_back((rng() & 1) ? 3 : 0, 2);
        bad.emplace_back(rng() % 4, 2);
    }
    CHECK(chi_square_gof(good, ref).p_value > 1e-3);
    ChiSquareReport rb = chi_square_gof(bad, ref);
    CHECK(rb.out_of_support);
    CHECK(rb.p_value == 0.0);
    CHECK_THROWS_AS(chi_square_gof(std::vector<BitString>(3, BitString(0, 2)), ref),
                    guard_error);
}

TEST_CASE("error budget allocation") {
    // all-Clifford: uniform split summing to delta/16
    ErrorBudget uni = allocate_error_budget(std::vector<double>(5, 1.0), 0.8);
    double sum = 0;
    for (double e : uni.epsilons) {
        CHECK(e == Catch::Approx(uni.epsilons[0]));
        sum += e;
    }
    CHECK(sum == Catch::Approx(0.8 / 16.0));
    // the exact cost matches the closed form at the optimum
    std::vector<double> xi = {xi_z_rotation(0.3), xi_z_rotation(1.1), xi_z_rotation(0.7),
                              1.0};
    ErrorBudget b = allocate_error_budget(xi, 0.25);
    CHECK(b.cost_exact == Catch::Approx(b.cost_closed_form).epsilon(1e-12));
    CHECK(b.cost_last_term <= b.cost_closed_form + 1e-9);

    CHECK(xi_z_rotation(0.0) == 1.0);
    CHECK(xi_z_rotation(std::numbers::pi / 4) > 1.0);
    CHECK_THROWS_AS(xi_z_rotation(2.0), guard_error);
    CHECK_THROWS_AS(allocate_error_budget({1.0, 1.0}, 0.0), guard_error);
    CHECK_THROWS_AS(allocate_error_budget({0.5, 1.0}, 0.1), guard_error);
    CHECK_THROWS_AS(allocate_error_budget({1.0}, 0.1), guard_error);
}

TEST_CASE("noise plan round trip and noisy oracle norms") {
    NoisePlan plan = parse_noise_plan("seed 11\n1 0.001\n2 0.002\n");
    CHECK(plan.epsilon(1) == 0.001);
    CHECK(plan.epsilon(5) == 0.0);
    CHECK(plan.sum_until(3) == Catch::Approx(0.003));
    NoisePlan again = parse_noise_plan(serialize_noise_plan(plan));
    CHECK(again.seed == 11);
    CHECK(again.epsilons == plan.epsilons);

    Circuit c = parse_circuit_file("data/ghz3.qc");
    NoisyOracle noisy(c, plan);
    noisy.apply(c.gates[0]);
    noisy.apply(c.gates[1]);
    const auto& realized = noisy.realized_epsilons();
    REQUIRE(realized.size() == 2);
    CHECK(realized[0] == Catch::Approx(0.001));
    CHECK(realized[1] == Catch::Approx(0.002));
}

TEST_CASE("noisy sampler at zero noise is exact") {
    Circuit c = parse_circuit_file("data/rot.qc");
    NoisyOracle exact(c, NoisePlan{});
    const Distribution ref = reference_distribution(c);
    CHECK(tv_distance(induced_sampler_distribution(c, exact, true), ref).l1 < 1e-12);
}

TEST_CASE("guards and forcing") {
    Circuit big;
    big.n = kInducedMaxQubits + 1;
    big.gates.push_back(make_gate("h", {0}));
    big.gates.push_back(make_gate("h", {1}));
    CHECK_THROWS_AS(reference_distribution(big), guard_error);
    CHECK_NOTHROW(reference_distribution(big, true));
}
