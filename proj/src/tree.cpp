#include "tropcr/tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace tropcr {

CrossRatio::CrossRatio(std::array<EndRef, 4> r, std::optional<Rat> len)
    : refs(r), length(std::move(len)) {
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (refs[i] == refs[j])
                throw std::invalid_argument("CrossRatio: ends must be pairwise distinct");
    if (length && *length <= 0)
        throw std::invalid_argument("CrossRatio: length must be positive");
    if (refs[1] < refs[0]) std::swap(refs[0], refs[1]);
    if (refs[3] < refs[2]) std::swap(refs[2], refs[3]);
    if (refs[2] < refs[0]) {
        std::swap(refs[0], refs[2]);
        std::swap(refs[1], refs[3]);
    }
}

std::string CrossRatio::str() const {
    std::string s = "(" + refs[0].str() + " " + refs[1].str() + " | " +
                    refs[2].str() + " " + refs[3].str() + ")";
    if (length) s += "=" + rat_str(*length);
    return s;
}

DegCrossRatio::DegCrossRatio(std::array<EndRef, 4> r) : refs(r) {
    std::sort(refs.begin(), refs.end());
    for (int i = 0; i < 3; ++i)
        if (refs[i] == refs[i + 1])
            throw std::invalid_argument("DegCrossRatio: ends must be pairwise distinct");
}

DegCrossRatio::DegCrossRatio(const CrossRatio& cr) : DegCrossRatio(cr.refs) {}

CrossRatio DegCrossRatio::with_default_pairing(std::optional<Rat> len) const {
    return CrossRatio(refs, std::move(len));
}

MarkedTree::MarkedTree(int n, int m, int num_nodes, std::vector<TreeEdge> edges)
    : n_(n), m_(m), num_nodes_(num_nodes), edges_(std::move(edges)) {
    finalize();
}

void MarkedTree::finalize() {
    int N = num_leaves();
    if (N < 1 || N > 64)
        throw std::invalid_argument("MarkedTree: 1..64 leaves supported");
    if (num_nodes_ < N)
        throw std::invalid_argument("MarkedTree: fewer nodes than leaves");
    if (static_cast<int>(edges_.size()) != num_nodes_ - 1)
        throw std::invalid_argument("MarkedTree: edge count must be nodes-1");
    adj_.assign(num_nodes_, {});
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        const auto& [u, v] = edges_[e];
        if (u < 0 || v < 0 || u >= num_nodes_ || v >= num_nodes_ || u == v)
            throw std::invalid_argument("MarkedTree: bad edge");
        adj_[u].push_back(e);
        adj_[v].push_back(e);
    }
    for (int i = 0; i < num_nodes_; ++i) {
        if (i < N && adj_[i].size() != 1)
            throw std::invalid_argument("MarkedTree: leaf node must have degree 1");
        if (i >= N && adj_[i].size() < 3)
            throw std::invalid_argument("MarkedTree: internal vertex valence must be >= 3");
    }
    // connectivity + side masks via iterative DFS from node 0
    mask_v_.assign(edges_.size(), 0);
    std::vector<int> parent_edge(num_nodes_, -2), order;
    order.reserve(num_nodes_);
    std::vector<int> stack{0};
    parent_edge[0] = -1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        order.push_back(u);
        for (int e : adj_[u]) {
            int w = other_end(e, u);
            if (parent_edge[w] == -2) {
                parent_edge[w] = e;
                stack.push_back(w);
            }
        }
    }
    if (static_cast<int>(order.size()) != num_nodes_)
        throw std::invalid_argument("MarkedTree: not connected");
    // accumulate leaf masks bottom-up: sub[u] = leaves in the subtree at u
    std::uint64_t full = (N == 64) ? ~0ULL : ((1ULL << N) - 1);
    std::vector<std::uint64_t> sub(num_nodes_, 0);
    for (int i = num_nodes_ - 1; i >= 0; --i) {
        int u = order[i];
        if (u < N) sub[u] |= (1ULL << u);
        if (parent_edge[u] >= 0) {
            int e = parent_edge[u];
            mask_v_[e] = (edges_[e].v == u) ? sub[u] : (full & ~sub[u]);
            sub[other_end(e, u)] |= sub[u];
        }
    }
    bounded_.clear();
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e)
        if (!is_end_edge(e)) bounded_.push_back(e);
}

int MarkedTree::node_of_ref(const EndRef& r) const {
    int leaf = r.is_point ? r.idx : n_ + r.idx;
    if (leaf < 1 || leaf > num_leaves() || (r.is_point && r.idx > n_) ||
        (!r.is_point && r.idx > m_) || r.idx < 1)
        throw std::invalid_argument("MarkedTree: end reference out of range: " + r.str());
    return leaf - 1;
}

int MarkedTree::leaf_edge(int leaf) const { return adj_[node_of_leaf(leaf)][0]; }

bool MarkedTree::is_end_edge(int e) const {
    return is_leaf_node(edges_[e].u) || is_leaf_node(edges_[e].v);
}

int MarkedTree::other_end(int e, int node) const {
    return edges_[e].u == node ? edges_[e].v : edges_[e].u;
}

std::uint64_t MarkedTree::side_mask(int e, int toward) const {
    std::uint64_t full =
        (num_leaves() == 64) ? ~0ULL : ((1ULL << num_leaves()) - 1);
    if (toward == edges_[e].v) return mask_v_[e];
    if (toward == edges_[e].u) return full & ~mask_v_[e];
    throw std::invalid_argument("side_mask: node not an endpoint of edge");
}

int MarkedTree::edge_towards(int v, int leaf) const {
    std::uint64_t bit = 1ULL << (leaf - 1);
    for (int e : adj_[v])
        if (side_mask(e, other_end(e, v)) & bit) return e;
    throw std::logic_error("edge_towards: leaf not found");
}

std::vector<int> MarkedTree::path_nodes(int a, int b) const {
    std::vector<int> par(num_nodes_, -2), stack{a};
    par[a] = -1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (u == b) break;
        for (int e : adj_[u]) {
            int w = other_end(e, u);
            if (par[w] == -2) {
                par[w] = u;
                stack.push_back(w);
            }
        }
    }
    std::vector<int> out;
    for (int u = b; u != -1; u = par[u]) out.push_back(u);
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<int> MarkedTree::path_edges(int a, int b) const {
    auto nodes = path_nodes(a, b);
    std::vector<int> out;
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        for (int e : adj_[nodes[i]])
            if (other_end(e, nodes[i]) == nodes[i + 1] &&
                (out.empty() || out.back() != e)) {
                out.push_back(e);
                break;
            }
    }
    return out;
}

std::string MarkedTree::canonical_string(
    const std::function<std::string(int edge)>& decorate) const {
    // Root at leaf node 0 (x_1 when n >= 1, else end label 1).
    std::function<std::string(int, int)> enc = [&](int node, int in_edge) {
        std::string core;
        if (is_leaf_node(node)) {
            int l = leaf_id(node);
            core = l <= n_ ? "x" + std::to_string(l)
                           : "e" + std::to_string(l - n_);
        } else {
            std::vector<std::string> kids;
            for (int e : adj_[node])
                if (e != in_edge) kids.push_back(enc(other_end(e, node), e));
            std::sort(kids.begin(), kids.end());
            core = "(";
            for (auto& k : kids) core += k + ",";
            core += ")";
        }
        if (in_edge >= 0 && decorate) core += "[" + decorate(in_edge) + "]";
        return core;
    };
    int root = 0;
    int e0 = adj_[root][0];
    std::string s = "root:" + enc(root, -1) + "=" + enc(other_end(e0, root), e0);
    if (decorate) s += "[" + decorate(e0) + "]";
    return s;
}

int separation_sign(const MarkedTree& t, int e, const CrossRatio& cr) {
    std::uint64_t side = t.side_mask(e, t.edges()[e].v);
    std::array<bool, 4> in;
    for (int i = 0; i < 4; ++i) {
        int leaf = t.node_of_ref(cr.refs[i]) + 1;
        in[i] = (side >> (leaf - 1)) & 1;
    }
    if (in[0] == in[1] && in[2] == in[3] && in[0] != in[2]) return 1;
    if (in[0] == in[3] && in[1] == in[2] && in[0] != in[1]) return -1;
    return 0;
}

bool lambda_at_vertex(const MarkedTree& t, int v, const DegCrossRatio& lam) {
    if (t.is_leaf_node(v)) return false;
    std::array<int, 4> dirs;
    for (int i = 0; i < 4; ++i)
        dirs[i] = t.edge_towards(v, t.node_of_ref(lam.refs[i]) + 1);
    std::sort(dirs.begin(), dirs.end());
    return std::unique(dirs.begin(), dirs.end()) == dirs.end();
}

std::vector<int> lambda_v(const MarkedTree& t, int v,
                          const std::vector<DegCrossRatio>& lams) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(lams.size()); ++i)
        if (lambda_at_vertex(t, v, lams[i])) out.push_back(i);
    return out;
}

bool validate_constrained_type(const MarkedTree& t,
                               const std::vector<DegCrossRatio>& lams,
                               std::string* why) {
    std::vector<bool> placed(lams.size(), false);
    for (int v = t.num_leaves(); v < t.num_nodes(); ++v) {
        auto here = lambda_v(t, v, lams);
        for (int i : here) {
            if (placed[i]) {
                if (why) *why = "cross-ratio placed at two vertices";
                return false;
            }
            placed[i] = true;
        }
        if (t.degree(v) != 3 + static_cast<int>(here.size())) {
            if (why)
                *why = "vertex valence " + std::to_string(t.degree(v)) +
                       " != 3 + " + std::to_string(here.size());
            return false;
        }
    }
    for (size_t i = 0; i < lams.size(); ++i)
        if (!placed[i]) {
            if (why) *why = "cross-ratio not satisfied at any vertex";
            return false;
        }
    return true;
}

}  // namespace tropcr
