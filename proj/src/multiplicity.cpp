#include "tropcr/multiplicity.hpp"

#include <algorithm>
#include <stdexcept>

namespace tropcr {

EvFtMatrix ev_ft_matrix(const StableMap& c, const std::vector<int>& dev,
                        const std::vector<CrossRatio>& crs) {
    const MarkedTree& t = c.tree;
    EvFtMatrix out;
    out.bounded = t.bounded_edges();
    int cols = 2 + static_cast<int>(out.bounded.size());
    int rows = 2 * t.n() + static_cast<int>(dev.size()) +
               static_cast<int>(crs.size());
    out.mat = MatQ(rows, cols);
    int root = t.node_of_leaf(1);
    std::vector<int> col_of_edge(t.edges().size(), -1);
    for (int j = 0; j < static_cast<int>(out.bounded.size()); ++j)
        col_of_edge[out.bounded[j]] = 2 + j;
    int r = 0;
    auto add_ev_rows = [&](int leaf, bool x_row, bool y_row) {
        int v = t.other_end(t.leaf_edge(leaf), t.node_of_leaf(leaf));
        auto nodes = t.path_nodes(root, v);
        auto es = t.path_edges(root, v);
        if (x_row) out.mat.at(r, 0) = 1;
        if (y_row) out.mat.at(r + (x_row ? 1 : 0), 1) = 1;
        for (size_t i = 0; i < es.size(); ++i) {
            int col = col_of_edge[es[i]];
            if (col < 0) continue;  // leaf edges never occur on these paths
            IntVec2 d = c.edge_dir(es[i], nodes[i]);
            if (x_row) out.mat.at(r, col) = d.x;
            if (y_row) out.mat.at(r + (x_row ? 1 : 0), col) = d.y;
        }
    };
    for (int i = 1; i <= t.n(); ++i) {
        add_ev_rows(i, true, true);
        out.row_desc.push_back("ev_x(x" + std::to_string(i) + ")");
        out.row_desc.push_back("ev_y(x" + std::to_string(i) + ")");
        r += 2;
    }
    for (int tlab : dev) {
        add_ev_rows(t.n() + tlab, false, true);
        out.row_desc.push_back("dev(e" + std::to_string(tlab) + ")");
        r += 1;
    }
    for (const auto& cr : crs) {
        for (int e : out.bounded)
            out.mat.at(r, col_of_edge[e]) = separation_sign(t, e, cr);
        out.row_desc.push_back("ft" + cr.str());
        r += 1;
    }
    return out;
}

Rat theta_matrix_det(const StableMap& c, const std::vector<CrossRatio>& crs) {
    const MarkedTree& t = c.tree;
    int root_leaf = t.node_of_leaf(1);
    int root = t.other_end(t.leaf_edge(1), root_leaf);
    const auto& bounded = t.bounded_edges();
    int nv = t.num_nodes() - t.num_leaves();
    int ne = static_cast<int>(bounded.size());
    int rows = 2 * ne + 2 * t.n() + static_cast<int>(crs.size());
    int cols = 2 * nv + ne;
    if (rows != cols)
        throw std::invalid_argument("theta_matrix_det: conditions do not square up");
    MatQ m(rows, cols);
    auto vidx = [&](int node) { return node - t.num_leaves(); };
    // orientation away from the root vertex: tail = endpoint closer to root
    std::vector<int> tail(ne), head(ne);
    for (int j = 0; j < ne; ++j) {
        int e = bounded[j];
        int u = t.edges()[e].u, v = t.edges()[e].v;
        auto pu = t.path_edges(root, u);
        bool u_is_tail =
            std::find(pu.begin(), pu.end(), e) == pu.end();
        tail[j] = u_is_tail ? u : v;
        head[j] = u_is_tail ? v : u;
    }
    // edge length generators
    for (int j = 0; j < ne; ++j) {
        int e = bounded[j];
        IntVec2 ng = c.edge_dir(e, tail[j]);
        m.at(2 * j, 2 * nv + j) = ng.x;
        m.at(2 * j + 1, 2 * nv + j) = ng.y;
        for (int i = 0; i < static_cast<int>(crs.size()); ++i)
            m.at(2 * ne + 2 * t.n() + i, 2 * nv + j) =
                separation_sign(t, e, crs[i]);
    }
    // vertex position generators
    for (int node = t.num_leaves(); node < t.num_nodes(); ++node) {
        int vc = 2 * vidx(node);
        for (int j = 0; j < ne; ++j) {
            int s = tail[j] == node ? 1 : (head[j] == node ? -1 : 0);
            if (s == 0) continue;
            m.at(2 * j, vc) = s;
            m.at(2 * j + 1, vc + 1) = s;
        }
        for (int i = 1; i <= t.n(); ++i) {
            int pv = t.other_end(t.leaf_edge(i), t.node_of_leaf(i));
            if (pv == node) {
                m.at(2 * ne + 2 * (i - 1), vc) = 1;
                m.at(2 * ne + 2 * (i - 1) + 1, vc + 1) = 1;
            }
        }
    }
    return m.det();
}

std::vector<BranchInfo> classify_components(const StableMap& c,
                                            const std::vector<DegCrossRatio>& lams,
                                            int v) {
    const MarkedTree& t = c.tree;
    // cross-ratio count carried by each internal vertex
    std::vector<int> nl(t.num_nodes(), 0);
    for (int u = t.num_leaves(); u < t.num_nodes(); ++u)
        nl[u] = static_cast<int>(lambda_v(t, u, lams).size());
    std::vector<BranchInfo> out;
    for (int e : t.adj(v)) {
        BranchInfo b;
        b.edge = e;
        b.dir = c.edge_dir(e, v);
        int far_node = t.other_end(e, v);
        if (t.is_leaf_node(far_node) && t.leaf_id(far_node) <= t.n()) {
            b.cls = BranchClass::ContractedEnd;
            out.push_back(b);
            continue;
        }
        std::uint64_t far = t.side_mask(e, far_node);
        int strict_ends = 0, pts = 0;
        for (int leaf = 1; leaf <= t.num_leaves(); ++leaf) {
            if (!((far >> (leaf - 1)) & 1)) continue;
            if (leaf <= t.n())
                ++pts;
            else
                ++strict_ends;
        }
        int lam_cnt = 0;
        for (int u = t.num_leaves(); u < t.num_nodes(); ++u) {
            if (u == v || nl[u] == 0) continue;
            auto pe = t.path_edges(v, u);
            if (!pe.empty() && pe.front() == e) lam_cnt += nl[u];
        }
        b.ends = strict_ends + 1;  // the cut edge stretches to one more end
        b.conditions = pts + lam_cnt;
        if (b.ends - 1 == b.conditions)
            b.cls = BranchClass::Fixed;
        else if (b.ends - 2 == b.conditions)
            b.cls = BranchClass::Free;
        else
            b.cls = BranchClass::Unbalanced;
        out.push_back(b);
    }
    return out;
}

Int local_ev_mult(const StableMap& c, const std::vector<DegCrossRatio>& lams,
                  int v) {
    auto branches = classify_components(c, lams, v);
    std::vector<IntVec2> fixed;
    for (const auto& b : branches) {
        if (b.cls == BranchClass::ContractedEnd) return Int(1);
        if (b.cls == BranchClass::Unbalanced) return Int(0);
        if (b.cls == BranchClass::Fixed) fixed.push_back(b.dir);
    }
    if (fixed.size() != 2) return Int(0);
    long long d = cross(fixed[0], fixed[1]);
    return Int(d < 0 ? -d : d);
}

Int local_resolution_weight(const std::vector<int>& star_edges,
                            const std::vector<LocalCross>& lams) {
    if (lams.size() <= 1) return Int(1);
    const LocalCross& l0 = lams.front();
    int fresh = *std::max_element(star_edges.begin(), star_edges.end()) + 1;
    for (const auto& l : lams)
        fresh = std::max(fresh,
                         *std::max_element(l.p.begin(), l.p.end()) + 1);
    // enumerate the side A (containing l0.p[0], l0.p[1]) over the free edges
    std::vector<int> free;
    for (int e : star_edges)
        if (e != l0.p[0] && e != l0.p[1] && e != l0.p[2] && e != l0.p[3])
            free.push_back(e);
    Int total = 0;
    for (std::uint64_t sub = 0; sub < (1ULL << free.size()); ++sub) {
        std::vector<int> A{l0.p[0], l0.p[1]}, B{l0.p[2], l0.p[3]};
        for (size_t i = 0; i < free.size(); ++i)
            (sub >> i & 1 ? A : B).push_back(free[i]);
        auto in = [](const std::vector<int>& s, int e) {
            return std::find(s.begin(), s.end(), e) != s.end();
        };
        std::vector<LocalCross> lamsA, lamsB;
        bool ok = true;
        for (size_t k = 1; k < lams.size() && ok; ++k) {
            LocalCross l = lams[k];
            int inA = 0;
            for (int e : l.p) inA += in(A, e) ? 1 : 0;
            if (inA >= 3) {
                for (auto& e : l.p)
                    if (!in(A, e)) e = fresh;  // reached through the new edge
                lamsA.push_back(l);
            } else if (inA <= 1) {
                for (auto& e : l.p)
                    if (!in(B, e)) e = fresh;
                lamsB.push_back(l);
            } else {
                ok = false;  // 2-2 split: sits at neither resolved vertex
            }
        }
        if (!ok) continue;
        // valence bookkeeping: val(v_A) = |A|+1 must equal 3 + #lamsA
        if (static_cast<int>(A.size()) + 1 != 3 + static_cast<int>(lamsA.size()))
            continue;
        std::vector<int> starA = A, starB = B;
        starA.push_back(fresh);
        starB.push_back(fresh);
        total += local_resolution_weight(starA, lamsA) *
                 local_resolution_weight(starB, lamsB);
    }
    return total;
}

Int resolution_weight_at_vertex(const StableMap& c,
                                const std::vector<CrossRatio>& pairings, int v) {
    const MarkedTree& t = c.tree;
    std::vector<DegCrossRatio> sets;
    sets.reserve(pairings.size());
    for (const auto& p : pairings) sets.emplace_back(p);
    auto here = lambda_v(t, v, sets);
    if (here.size() <= 1) return Int(1);
    std::vector<int> star = t.adj(v);
    std::vector<LocalCross> local;
    for (int i : here) {
        LocalCross l;
        for (int k = 0; k < 4; ++k)
            l.p[k] = t.edge_towards(v, t.node_of_ref(pairings[i].refs[k]) + 1);
        local.push_back(l);
    }
    return local_resolution_weight(star, local);
}

Int total_multiplicity(const StableMap& c,
                       const std::vector<CrossRatio>& pairings) {
    std::vector<DegCrossRatio> sets;
    sets.reserve(pairings.size());
    for (const auto& p : pairings) sets.emplace_back(p);
    Int total = 1;
    for (int v = c.tree.num_leaves(); v < c.tree.num_nodes(); ++v) {
        total *= local_ev_mult(c, sets, v);
        if (total == 0) return total;
        total *= resolution_weight_at_vertex(c, pairings, v);
        if (total == 0) return total;
    }
    return total;
}

}  // namespace tropcr
