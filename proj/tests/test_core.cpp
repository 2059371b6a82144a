#include <catch2/catch_amalgamated.hpp>

#include "ampsamp/circuit.hpp"

using namespace ampsamp;

TEST_CASE("bitstring round trip and restriction") {
    BitString b = BitString::parse("0110");
    CHECK(b.n == 4);
    CHECK(b.bit(0) == 0);
    CHECK(b.bit(1) == 1);
    CHECK(b.str() == "0110");
    CHECK(b.restrict_to({2, 1}) == 0b11u);
    CHECK(b.restrict_to({3, 0}) == 0u);
    CHECK_THROWS_AS(BitString::parse("01a"), guard_error);
    CHECK(hamming_distance(0b0110, 0b1110) == 1);
}

TEST_CASE("gate classification") {
    CHECK(classify_gate(make_gate("z", {0})) == GateClass::Diagonal);
    CHECK(classify_gate(make_gate("rz", {0}, 0.3)) == GateClass::Diagonal);
    CHECK(classify_gate(make_gate("cz", {0, 1})) == GateClass::Diagonal);
    CHECK(classify_gate(make_gate("x", {0})) == GateClass::BasisPermutation);
    CHECK(classify_gate(make_gate("cx", {0, 1})) == GateClass::BasisPermutation);
    CHECK(classify_gate(make_gate("swap", {0, 1})) == GateClass::BasisPermutation);
    CHECK(classify_gate(make_gate("h", {0})) == GateClass::General);

    // classification is stable under a global phase
    Gate g = make_gate("x", {0});
    g.matrix *= std::polar(1.0, 0.83);
    CHECK(classify_gate(g) == GateClass::BasisPermutation);
}

TEST_CASE("permutation gate application") {
    const Gate cx = make_gate("cx", {0, 1});
    // control qubit 0 set: target flips
    auto [y, phase] = apply_permutation_gate(cx, BitString::parse("10"));
    CHECK(y.str() == "11");
    CHECK(std::abs(phase - cplx{1, 0}) < 1e-12);
    auto [y0, p0] = apply_permutation_gate(cx, BitString::parse("00"));
    CHECK(y0.str() == "00");
    CHECK_THROWS_AS(apply_permutation_gate(make_gate("h", {0}), BitString::parse("0")),
                    guard_error);
}

TEST_CASE("gate validation") {
    Gate g = make_gate("h", {0});
    CHECK_NOTHROW(validate_gate(g, 2));
    g.support = {5};
    CHECK_THROWS_AS(validate_gate(g, 2), guard_error);
    Gate bad = make_gate("cx", {0, 0});
    CHECK_THROWS_AS(validate_gate(bad, 2), guard_error);
    Gate nonunitary = make_gate("h", {0});
    nonunitary.matrix(0, 0) = 2.0;
    CHECK_THROWS_AS(validate_gate(nonunitary, 2), guard_error);
}

TEST_CASE("circuit parsing") {
    Circuit c = parse_circuit("qubits 2\nh 0\ncx 0 1\nrz 1 0.5\n# comment\n");
    CHECK(c.n == 2);
    CHECK(c.m() == 3);
    CHECK(c.gates[2].label == "rz");
    CHECK(c.max_arity() == 2);

    CHECK_THROWS_AS(parse_circuit("h 0\n"), parse_error);
    CHECK_THROWS_AS(parse_circuit("qubits 2\nbogus 0\n"), parse_error);
    CHECK_THROWS_AS(parse_circuit("qubits 2\nh 7\n"), parse_error);
}

TEST_CASE("matrix gate parsing round trip") {
    const std::string text =
        "qubits 1\nmatrix 1 0 0.70710678118654752,0 0.70710678118654752,0 "
        "0.70710678118654752,0 -0.70710678118654752,0\n";
    Circuit c = parse_circuit(text);
    CHECK((c.gates[0].matrix - gates::h()).cwiseAbs().maxCoeff() < 1e-12);

    Circuit again = parse_circuit(serialize_circuit(c));
    CHECK((again.gates[0].matrix - c.gates[0].matrix).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("adaptive circuit parse from data files") {
    Circuit c = parse_circuit_file("data/adapt.qc");
    REQUIRE(c.is_adaptive(1));
    const auto& rule = c.adaptive.at(1);
    CHECK(rule.controls == std::vector<int>{0});
    CHECK(rule.table.at(0).label == "id");      // host fallback
    CHECK(rule.table.at(1).label == "x/ctrl");  // table entry
    // the resolved gate depends on the control bit
    CHECK(c.resolve(1, BitString::parse("10")).label == "x/ctrl");
    CHECK(c.resolve(1, BitString::parse("00")).label == "id");
}

TEST_CASE("control qubit reuse is rejected") {
    // the control bit of the adaptive slot is touched afterwards
    const std::string text = "qubits 2\nh 0\nid 1 ctrl data/adapt.ctrl\nh 0\n";
    CHECK_THROWS_AS(parse_circuit(text), parse_error);
}
