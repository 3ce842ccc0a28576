#include "doctest.h"

#include "tropcr/problem.hpp"

using namespace tropcr;

namespace {

const char* kCubic = R"({
  "degree": {"type": "delta_d", "d": 3},
  "n": 7,
  "cross_ratios": [{"refs": ["x1", "x2", "e7", "e8"]}],
  "seed": 11
})";

const char* kLine = R"({
  "degree": {"type": "delta_d", "d": 1},
  "n": 2,
  "cross_ratios": [],
  "seed": 5
})";

}  // namespace

TEST_CASE("problem parsing: the cubic instance") {
    ProblemFile p = parse_problem(kCubic);
    CHECK(p.n == 7);
    CHECK(p.degree.size() == 9);
    CHECK(p.cross.empty());
    REQUIRE(p.deg_cross.size() == 1);
    CHECK(p.deg_cross[0].refs[0] == EndRef::point(1));
    CHECK(p.deg_cross[0].refs[3] == EndRef::end(8));
    CHECK(p.seed == 11);
}

TEST_CASE("problem parsing: errors") {
    // 7 + 2 != 8 conditions
    CHECK_THROWS_WITH_AS(
        parse_problem(R"({"degree": {"type": "delta_d", "d": 3}, "n": 7,
          "cross_ratios": [["x1","x2","e7","e8"], ["x3","x4","e1","e2"]]})"),
        "condition count mismatch", std::invalid_argument);
    // end label out of range for delta_d(3)
    CHECK_THROWS_WITH_AS(
        parse_problem(R"({"degree": {"type": "delta_d", "d": 3}, "n": 7,
          "cross_ratios": [["x1","x2","e7","e10"]]})"),
        "unresolved reference: e10", std::invalid_argument);
    // repeated ref inside one cross-ratio
    CHECK_THROWS_WITH_AS(
        parse_problem(R"({"degree": {"type": "delta_d", "d": 3}, "n": 7,
          "cross_ratios": [["x1","x1","e7","e8"]]})"),
        "degenerate cross-ratio", std::invalid_argument);
    // malformed ref string
    CHECK_THROWS(parse_problem(R"({"degree": {"type": "delta_d", "d": 3},
      "n": 7, "cross_ratios": [["x1","y2","e7","e8"]]})"));
    // equal finite lengths
    CHECK_THROWS(parse_problem(R"({"degree": {"type": "delta_d", "d": 2},
      "n": 3, "cross_ratios": [
        {"refs": ["x1","x2","e1","e2"], "length": "1/2"},
        {"refs": ["x1","x3","e3","e4"], "length": "1/2"}]})"));
}

TEST_CASE("problem json round-trip") {
    ProblemFile p = parse_problem(kCubic);
    CHECK(parse_problem(problem_to_json(p)) == p);

    ProblemFile q = parse_problem(R"({
      "degree": {"type": "hirzebruch", "s": 1, "b": 1,
                 "alpha": [2], "beta": [1]},
      "n": 2,
      "cross_ratios": [{"refs": ["x1", "x2", "e1", "e3"], "length": "3/2"}],
      "seed": 7})");
    CHECK(q.cross.size() == 1);
    CHECK(*q.cross[0].length == Rat(3, 2));
    CHECK(parse_problem(problem_to_json(q)) == q);
}

TEST_CASE("run_count dispatch and cross-check on the line") {
    ProblemFile p = parse_problem(kLine);
    ResultReport oracle = run_count(p, "oracle");
    ResultReport lpa = run_count(p, "lattice-path");
    ResultReport floor = run_count(p, "floor");
    CHECK(oracle.count == 1);
    CHECK(lpa.count == 1);
    CHECK(floor.count == 1);
    ResultReport cc = run_count(p, "cross-check");
    CHECK(cc.count == 1);
    CHECK(cc.cross_results.size() == 3);

    CHECK_THROWS_AS(run_count(p, "newton-polygon"), std::invalid_argument);
}

TEST_CASE("algorithm applicability") {
    // floor diagrams need all-point cross-ratio entries
    ProblemFile p = parse_problem(R"({
      "degree": {"type": "delta_d", "d": 2},
      "n": 4, "cross_ratios": [["x1","x2","e1","e4"]], "seed": 3})");
    CHECK_THROWS_AS(run_count(p, "floor"), std::invalid_argument);
    CHECK(run_count(p, "lattice-path").count == run_count(p, "oracle").count);

    // non-triangle degrees fall back to the oracle
    ProblemFile h = parse_problem(R"({
      "degree": {"type": "hirzebruch", "s": 1, "b": 1,
                 "alpha": [1, 1], "beta": [1]},
      "n": 4, "cross_ratios": [], "seed": 3})");
    CHECK_THROWS_AS(run_count(h, "lattice-path"), std::invalid_argument);
    CHECK(run_count(h, "oracle").count > 0);

    // desk-scale limit
    ProblemFile big = parse_problem(R"({
      "degree": {"type": "delta_d", "d": 3},
      "n": 8, "cross_ratios": [], "seed": 3})");
    CHECK_THROWS_AS(run_count(big, "oracle"), ResourceLimit);
}

TEST_CASE("emission formats") {
    ProblemFile p = parse_problem(kLine);
    ResultReport r = run_count(p, "lattice-path", true);
    REQUIRE(r.objects.size() == 1);
    CHECK(r.objects[0].mult == 1);

    std::string js = emit_json(p, r, true);
    CHECK(js.find("\"schema_version\": 1") != std::string::npos);
    CHECK(js.find("\"count\": \"1\"") != std::string::npos);
    CHECK(js.find("millis") == std::string::npos);
    // canonical output is reproducible byte for byte
    CHECK(js == emit_json(p, run_count(p, "lattice-path", true), true));
    // the echoed problem block round-trips
    auto start = js.find("\"problem\": {");
    REQUIRE(start != std::string::npos);

    std::string dot = emit_dot(r);
    CHECK(dot.substr(0, 5) == "graph");
    CHECK(dot.find("x1") != std::string::npos);
    CHECK(dot.find("--") != std::string::npos);

    std::string listing = emit_listing(r);
    CHECK(listing.find("count: 1") != std::string::npos);

    ResultReport f = run_count(p, "floor", true);
    REQUIRE(f.objects.size() == 1);
    CHECK(f.objects[0].kind == "floor-diagram");
    CHECK(emit_dot(f).find("s=") != std::string::npos);
}
