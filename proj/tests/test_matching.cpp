#include <catch2/catch_amalgamated.hpp>

#include "ampsamp/matching.hpp"

using namespace ampsamp;

TEST_CASE("matching instance parsing") {
    MatchingInstance k4 = parse_matching_instance_file("data/k4.match");
    CHECK(k4.num_vertices == 4);
    CHECK(k4.plain_edges.size() == 6);
    CHECK(k4.crossings.empty());

    MatchingInstance k33 = parse_matching_instance_file("data/k33.match");
    CHECK(k33.num_vertices == 6);
    CHECK(k33.plain_edges.size() == 7);
    REQUIRE(k33.crossings.size() == 1);
    CHECK(k33.original_edges().size() == 9);

    CHECK_THROWS_AS(parse_matching_instance("vertices 2\nedge 0 1\n"),
                    parse_error); // degree 1, not 3-regular
    CHECK_THROWS_AS(parse_matching_instance("edge 0 1\n"), parse_error);
    CHECK_THROWS_AS(parse_matching_instance("vertices 2\nedge 0 5\nedge 0 1\nedge 0 1\n"),
                    parse_error); // vertex out of range
    CHECK_THROWS_AS(parse_matching_instance(""), parse_error);
}

TEST_CASE("brute-force perfect matching counts") {
    CHECK(count_perfect_matchings(parse_matching_instance_file("data/k4.match")) == 3);
    CHECK(count_perfect_matchings(parse_matching_instance_file("data/k2triple.match")) == 3);
    CHECK(count_perfect_matchings(parse_matching_instance_file("data/k33.match")) == 6);
}

TEST_CASE("reduction counts K4") {
    ReductionResult r = perfect_matchings_via_reduction(parse_matching_instance_file("data/k4.match"));
    CHECK(r.count == 3);
    CHECK(r.count == r.brute_force);
    CHECK(r.cycle_dim == 7);
    CHECK(std::abs(r.raw - 3.0) < 1e-6);
}

TEST_CASE("reduction counts the triple edge") {
    ReductionResult r =
        perfect_matchings_via_reduction(parse_matching_instance_file("data/k2triple.match"));
    CHECK(r.count == 3);
    CHECK(r.count == r.brute_force);
    CHECK(r.cycle_dim == 4);
}

TEST_CASE("reduction counts K33 through one crossing") {
    ReductionResult r =
        perfect_matchings_via_reduction(parse_matching_instance_file("data/k33.match"));
    CHECK(r.count == 6);
    CHECK(r.count == r.brute_force);
    CHECK(r.cycle_dim == 13);
}
