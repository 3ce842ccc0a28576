#include "doctest.h"

#include "tropcr/floor_diagrams.hpp"

using namespace tropcr;

namespace {

DegCrossRatio points4(int a, int b, int c, int d) {
    return DegCrossRatio({EndRef::point(a), EndRef::point(b), EndRef::point(c),
                          EndRef::point(d)});
}

// Degree-3 diagram on 7 vertices satisfying {x1,x4,x5,x6} at v5: three size-0
// vertices carrying one horizontal end each feed the size-1 floors v4 and v5;
// v6 is a bare size-0 vertex between the floors v5 and v7.
FloorDiagram example_d3() {
    FloorDiagram f;
    f.d = 3;
    f.n = 7;
    f.edges = {{0, 4}, {1, 3}, {2, 3}, {3, 4}, {4, 5}, {5, 6}};
    f.weight = {1, 1, 1, 1, 1, 1};
    f.size_v = {0, 0, 0, 1, 1, 0, 1};
    f.ends_v = {1, 1, 1, 0, 0, 0, 0};
    f.thick_at_min = {true, true, true, false, false, true};
    f.lambda_vertex = {4};
    return f;
}

}  // namespace

TEST_CASE("floor diagram validation of a hand-built example") {
    FloorDiagram f = example_d3();
    std::vector<DegCrossRatio> lams{points4(1, 4, 5, 6)};
    CHECK_NOTHROW(validate_diagram(f, lams));
    CHECK(f.thick_count(4) == 1);
    CHECK(f.thick_count(5) == 2);
    CHECK(f.thick_count(6) == 0);

    FloorDiagram bad = f;
    bad.thick_at_min[5] = false;  // breaks the counts at v6 and v7
    CHECK_THROWS_AS(validate_diagram(bad, lams), std::invalid_argument);
    bad = f;
    bad.weight[0] = 2;  // breaks the flow balance
    CHECK_THROWS_AS(validate_diagram(bad, lams), std::invalid_argument);
    bad = f;
    bad.lambda_vertex = {3};  // the cross-ratio paths meet at v5, not v4
    CHECK_THROWS_AS(validate_diagram(bad, lams), std::invalid_argument);
}

TEST_CASE("lambda placement accepts stars and rejects overlapping paths") {
    std::vector<std::array<int, 2>> path{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
    // paths v1..v3 and v2..v4 share the edge v2v3: not satisfied
    CHECK_FALSE(lambda_vertices(5, path, {points4(1, 3, 2, 4)}));
    // on a path no vertex has four distinct branches, even with its own point
    CHECK_FALSE(lambda_vertices(5, path, {points4(1, 3, 4, 5)}));
    // v3 of a spider sees x1, x2, x4, x5 through four distinct edges
    std::vector<std::array<int, 2>> spider{{0, 2}, {1, 2}, {2, 3}, {2, 4}};
    auto lv = lambda_vertices(5, spider, {points4(1, 2, 4, 5)});
    REQUIRE(lv);
    CHECK((*lv)[0] == 2);
    // the own point of the vertex may be one of the four references
    auto lv3 = lambda_vertices(5, spider, {points4(1, 2, 3, 4)});
    REQUIRE(lv3);
    CHECK((*lv3)[0] == 2);
    // star around v5 satisfies any 4-set not containing the center... the
    // paths of {x1,x2},{x3,x4} all run through the center v5
    std::vector<std::array<int, 2>> star{{0, 4}, {1, 4}, {2, 4}, {3, 4}};
    auto lv2 = lambda_vertices(5, star, {points4(1, 2, 3, 4)});
    REQUIRE(lv2);
    CHECK((*lv2)[0] == 4);
}

TEST_CASE("pieces of the degree-3 example") {
    FloorDiagram f = example_d3();
    std::vector<DegCrossRatio> lams{points4(1, 4, 5, 6)};
    auto pieces = diagram_pieces(f, lams);
    REQUIRE(pieces.probs.size() == 7);
    // v5 (index 4): two incoming elevators, one outgoing, one floor
    const OracleProblem& p = pieces.probs[4];
    CHECK(p.degree.size() == 5);
    CHECK(p.dev.size() == 2);  // thin half-edges towards v1 and v6
    REQUIRE(p.deg_cross.size() == 1);
    // rewritten cross-ratio references the own point and three cut ends
    CHECK(p.deg_cross[0].refs[0] == EndRef::point(1));
    for (int i = 1; i < 4; ++i) CHECK_FALSE(p.deg_cross[0].refs[i].is_point);
    // sizes: piece conditions match the squareness requirement
    CHECK_NOTHROW(p.validate());
    for (const auto& prob : pieces.probs) CHECK_NOTHROW(prob.validate());

    CHECK(diagram_multiplicity(f, lams, 5) == 1);
    CHECK(label_distribution_factor(f) == 216);  // 3!/(1!1!1!) * (3!/1!1!1!)^2
}

TEST_CASE("floor counts: lines and conics") {
    CHECK(floor_count(1, 2, {}, 3).total == 1);
    auto res = floor_count(2, 5, {}, 3, true);
    CHECK(res.total == 8);
    for (const auto& [f, contrib] : res.contributions) {
        CHECK_NOTHROW(validate_diagram(f, {}));
        CHECK(contrib > 0);
    }
    CHECK_THROWS_AS(floor_count(2, 4, {}, 1), std::invalid_argument);  // n+l
    CHECK_THROWS_AS(
        floor_count(2, 4,
                    {DegCrossRatio({EndRef::point(1), EndRef::point(2),
                                    EndRef::point(3), EndRef::end(1)})},
                    1),
        std::invalid_argument);  // entries must be points
}

TEST_CASE("floor count with a cross-ratio matches the oracle") {
    // degree 2, four points, one cross-ratio {x1,x2,x3,x4}
    std::vector<DegCrossRatio> lams{points4(1, 2, 3, 4)};
    auto fc = floor_count(2, 4, lams, 9);
    CHECK(fc.total > 0);

    OracleProblem p;
    p.degree = delta_d(2);
    p.n = 4;
    p.deg_cross = lams;
    CHECK(fc.total == oracle_count(p, 31));
}

TEST_CASE("floor count: cubics with one cross-ratio") {
    // four diagrams, each contributing 216
    std::vector<DegCrossRatio> lams{points4(1, 2, 3, 4)};
    auto res = floor_count(3, 7, lams, 11, true);
    CHECK(res.total == 864);
    CHECK(res.diagrams == 4);
    for (const auto& [f, contrib] : res.contributions) {
        CHECK_NOTHROW(validate_diagram(f, lams));
        CHECK(contrib == 216);
    }
}
