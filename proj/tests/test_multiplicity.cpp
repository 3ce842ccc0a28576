#include "doctest.h"

#include "tropcr/multiplicity.hpp"

#include <algorithm>
#include <map>

using namespace tropcr;

namespace {

// Weighted line spanned by {(-2,1),(1,-2),(1,1)} through two points, one
// next to each of the first two ends. Expected multiplicity 3.
StableMap weighted_line() {
    std::vector<TreeEdge> es{
        {0, 5}, {2, 5}, {5, 6},  // x1, E1, b1
        {3, 6}, {6, 7},          // E2, b2
        {1, 7}, {4, 7},          // x2, E3
    };
    MarkedTree t(2, 3, 8, es);
    Degree d({{{-2, 1}, 1}, {{1, -2}, 2}, {{1, 1}, 3}});
    return StableMap(t, d);
}

// Degree-1 line through one point with one cross-ratio (x1 e1 | e2 e3):
// x1 sits at the vertex of ends e2? no: vertex v5 = (e1,e2,b), v6 = (b,x1,e3).
StableMap line_point_cross() {
    std::vector<TreeEdge> es{
        {1, 4}, {2, 4}, {4, 5}, {0, 5}, {3, 5},
    };
    MarkedTree t(1, 3, 6, es);
    return StableMap(t, delta_d(1));
}

// Independent re-implementation of the resolution recursion that resolves the
// *last* cross-ratio at every step (the production code resolves the first).
Int slow_weight(const std::vector<int>& edges, std::vector<LocalCross> lams) {
    if (lams.size() <= 1) return 1;
    LocalCross head = lams.back();
    lams.pop_back();
    std::vector<int> frees;
    for (int e : edges) {
        if (std::find(head.p.begin(), head.p.end(), e) == head.p.end())
            frees.push_back(e);
    }
    int fresh = 1 + *std::max_element(edges.begin(), edges.end());
    Int total = 0;
    for (std::uint32_t s = 0; s < (1u << frees.size()); ++s) {
        std::vector<int> A{head.p[0], head.p[1]}, B{head.p[2], head.p[3]};
        for (size_t i = 0; i < frees.size(); ++i)
            ((s >> i) & 1 ? A : B).push_back(frees[i]);
        std::vector<LocalCross> lamsA, lamsB;
        bool ok = true;
        for (const LocalCross& l : lams) {
            int inA = 0;
            for (int e : l.p)
                inA += std::count(A.begin(), A.end(), e) ? 1 : 0;
            std::vector<LocalCross>* dst = nullptr;
            const std::vector<int>* side = nullptr;
            if (inA >= 3) { dst = &lamsA; side = &A; }
            else if (4 - inA >= 3) { dst = &lamsB; side = &B; }
            else { ok = false; break; }
            LocalCross moved = l;  // far labels cross through the new edge
            for (int& e : moved.p)
                if (!std::count(side->begin(), side->end(), e)) e = fresh;
            dst->push_back(moved);
        }
        if (!ok) continue;
        if (static_cast<int>(A.size()) + 1 != 3 + static_cast<int>(lamsA.size()))
            continue;
        if (static_cast<int>(B.size()) + 1 != 3 + static_cast<int>(lamsB.size()))
            continue;
        std::vector<int> ea = A, eb = B;
        ea.push_back(fresh);
        eb.push_back(fresh);
        total += slow_weight(ea, lamsA) * slow_weight(eb, lamsB);
    }
    return total;
}

}  // namespace

TEST_CASE("condition matrix of a line through two points") {
    StableMap c = weighted_line();
    auto A = ev_ft_matrix(c, {}, {});
    REQUIRE(A.mat.rows() == 4);
    REQUIRE(A.mat.cols() == 4);
    // rows: x1 at the anchor, x2 reached over directions (2,-1) and (1,1)
    CHECK(A.mat.at(0, 0) == 1);
    CHECK(A.mat.at(2, 2) == 2);
    CHECK(A.mat.at(3, 2) == -1);
    CHECK(A.mat.at(2, 3) == 1);
    CHECK(A.mat.at(3, 3) == 1);
    CHECK(abs(A.mat.det()) == 3);
    CHECK(abs(theta_matrix_det(c, {})) == 3);
}

TEST_CASE("condition matrix with a cross-ratio row") {
    StableMap c = line_point_cross();
    CrossRatio cr({EndRef::point(1), EndRef::end(1), EndRef::end(2),
                   EndRef::end(3)},
                  Rat(2));
    auto A = ev_ft_matrix(c, {}, {cr});
    REQUIRE(A.mat.rows() == 3);
    REQUIRE(A.mat.cols() == 3);
    // the single bounded edge separates {e1,e2} from {x1,e3}: sign -1
    CHECK(A.mat.at(2, 2) == -1);
    CHECK(abs(A.mat.det()) == 1);
    CHECK(abs(theta_matrix_det(c, {cr})) == 1);
}

TEST_CASE("end height conditions enter as y-rows") {
    // degree-1 line, one point, one conditioned horizontal end
    StableMap c = line_point_cross();
    auto A = ev_ft_matrix(c, {1}, {});
    REQUIRE(A.mat.rows() == 3);
    // e1's vertex is reached from x1 over the bounded edge with dir (-1,-1)
    CHECK(A.mat.at(2, 0) == 0);
    CHECK(A.mat.at(2, 1) == 1);
    CHECK(A.mat.at(2, 2) == -1);
    CHECK(abs(A.mat.det()) == 1);
}

TEST_CASE("branch classification and local multiplicities") {
    StableMap c = weighted_line();
    // middle vertex 6: two fixed branches (towards x1 and x2), one free end
    auto br = classify_components(c, {}, 6);
    std::map<BranchClass, int> count;
    for (auto& b : br) ++count[b.cls];
    CHECK(count[BranchClass::Fixed] == 2);
    CHECK(count[BranchClass::Free] == 1);
    CHECK(local_ev_mult(c, {}, 6) == 3);
    // point vertices carry a contracted end: multiplicity 1
    auto br5 = classify_components(c, {}, 5);
    CHECK(std::any_of(br5.begin(), br5.end(), [](const BranchInfo& b) {
        return b.cls == BranchClass::ContractedEnd;
    }));
    CHECK(local_ev_mult(c, {}, 5) == 1);
    CHECK(total_multiplicity(c, {}) == 3);
}

TEST_CASE("classification at a four-valent cross-ratio vertex") {
    // node of a horizontal and a vertical line: degree
    // {(-1,0),(0,-1),(1,0),(0,1)}, x1 on the horizontal leg, x2 on the
    // vertical one, lambda = {x1,x2,e3,e4} at the central 4-valent vertex.
    std::vector<TreeEdge> es{
        {0, 6}, {2, 6}, {6, 8},  // x1, e1, b1
        {1, 7}, {3, 7}, {7, 8},  // x2, e2, b2
        {4, 8}, {5, 8},          // e3, e4
    };
    MarkedTree t(2, 4, 9, es);
    Degree d({{{-1, 0}, 1}, {{0, -1}, 2}, {{1, 0}, 3}, {{0, 1}, 4}});
    StableMap c(t, d);
    DegCrossRatio lam({EndRef::point(1), EndRef::point(2), EndRef::end(3),
                       EndRef::end(4)});
    REQUIRE(lambda_at_vertex(c.tree, 8, lam));
    REQUIRE(validate_constrained_type(c.tree, {lam}));

    auto br = classify_components(c, {lam}, 8);
    std::map<BranchClass, int> count;
    for (auto& b : br) {
        ++count[b.cls];
        if (b.cls == BranchClass::Fixed) {
            // branches towards the marked points: one point condition,
            // one strict end plus the stretched cut edge
            CHECK(b.ends == 2);
            CHECK(b.conditions == 1);
        }
    }
    CHECK(count[BranchClass::Fixed] == 2);
    CHECK(count[BranchClass::Free] == 2);
    CHECK(local_ev_mult(c, {lam}, 8) == 1);

    CrossRatio pairing = lam.with_default_pairing();
    CHECK(resolution_weight_at_vertex(c, {pairing}, 8) == 1);
    CHECK(total_multiplicity(c, {pairing}) == 1);
}

TEST_CASE("resolution weights: base cases and hand values") {
    CHECK(local_resolution_weight({1, 2, 3}, {}) == 1);
    CHECK(local_resolution_weight({1, 2, 3, 4}, {LocalCross{{1, 2, 3, 4}}}) == 1);
    // 5-valent, two cross-ratios sharing three labels: unique resolution
    CHECK(local_resolution_weight(
              {1, 2, 3, 4, 5},
              {LocalCross{{1, 2, 3, 4}}, LocalCross{{1, 2, 3, 5}}}) == 1);
    // duplicated cross-ratio: over-constrained, weight 0
    CHECK(local_resolution_weight(
              {1, 2, 3, 4, 5},
              {LocalCross{{1, 2, 3, 4}}, LocalCross{{1, 2, 3, 4}}}) == 0);
    // 6-valent with three interleaved cross-ratios: two resolutions
    std::vector<LocalCross> trio{LocalCross{{1, 2, 3, 4}},
                                 LocalCross{{1, 5, 2, 6}},
                                 LocalCross{{3, 5, 4, 6}}};
    CHECK(local_resolution_weight({1, 2, 3, 4, 5, 6}, trio) == 2);
    // invariant under re-pairing of the first cross-ratio
    std::vector<LocalCross> trio2 = trio;
    trio2[0] = LocalCross{{1, 3, 2, 4}};
    CHECK(local_resolution_weight({1, 2, 3, 4, 5, 6}, trio2) == 2);
}

TEST_CASE("resolution weights agree with an independent recursion") {
    std::vector<int> edges{1, 2, 3, 4, 5};
    // all ordered pairs of 4-subsets with all three pairings each
    std::vector<LocalCross> all;
    for (int skip = 1; skip <= 5; ++skip) {
        std::vector<int> q;
        for (int e = 1; e <= 5; ++e)
            if (e != skip) q.push_back(e);
        all.push_back(LocalCross{{q[0], q[1], q[2], q[3]}});
        all.push_back(LocalCross{{q[0], q[2], q[1], q[3]}});
        all.push_back(LocalCross{{q[0], q[3], q[1], q[2]}});
    }
    int nonzero = 0;
    for (const auto& a : all) {
        for (const auto& b : all) {
            std::vector<LocalCross> lams{a, b};
            Int w = local_resolution_weight(edges, lams);
            CHECK(w == slow_weight(edges, lams));
            // order of the cross-ratios must not matter either
            CHECK(w == local_resolution_weight(edges, {b, a}));
            if (w > 0) ++nonzero;
        }
    }
    CHECK(nonzero > 0);

    // a sample of 6-valent stars with three cross-ratios
    std::vector<int> edges6{1, 2, 3, 4, 5, 6};
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    auto rnd = [&state](int bound) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<int>((state >> 33) % bound);
    };
    int nonzero6 = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<LocalCross> lams;
        for (int j = 0; j < 3; ++j) {
            std::vector<int> pool{1, 2, 3, 4, 5, 6};
            std::array<int, 4> pick{};
            for (int k = 0; k < 4; ++k) {
                int i = rnd(static_cast<int>(pool.size()));
                pick[k] = pool[i];
                pool.erase(pool.begin() + i);
            }
            lams.push_back(LocalCross{pick});
        }
        Int w = local_resolution_weight(edges6, lams);
        CHECK(w == slow_weight(edges6, lams));
        if (w > 0) ++nonzero6;
    }
    CHECK(nonzero6 > 0);
}
