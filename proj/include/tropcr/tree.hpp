#pragma once

// Leaf-labeled marked trees: the combinatorial skeleton of rational tropical
// stable maps. Leaves 1..n are contracted marked points x_1..x_n, leaves
// n+1..n+m carry the degree labels 1..m of the non-contracted ends.

#include "tropcr/core.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tropcr {

// Reference to an end of a curve: marked point x_j or degree end label t.
struct EndRef {
    bool is_point = true;
    int idx = 0;  // 1-based

    static EndRef point(int j) { return {true, j}; }
    static EndRef end(int t) { return {false, t}; }

    bool operator==(const EndRef& o) const {
        return is_point == o.is_point && idx == o.idx;
    }
    bool operator<(const EndRef& o) const {
        if (is_point != o.is_point) return is_point;  // points before ends
        return idx < o.idx;
    }
    std::string str() const {
        return (is_point ? "x" : "e") + std::to_string(idx);
    }
};

// A tropical cross-ratio. The four refs are stored with the pairing
// (refs[0] refs[1] | refs[2] refs[3]), canonicalized: each pair sorted, the
// pair with the smaller first element first. A missing length means the
// condition is degenerated (length zero, purely combinatorial).
struct CrossRatio {
    std::array<EndRef, 4> refs;
    std::optional<Rat> length;

    CrossRatio() = default;
    CrossRatio(std::array<EndRef, 4> r, std::optional<Rat> len = std::nullopt);

    bool degenerate() const { return !length.has_value(); }
    std::string str() const;
};

// Degenerated cross-ratio: an unordered 4-set of ends. The default pairing
// pairs the two smallest refs against the two largest (canonical order).
struct DegCrossRatio {
    std::array<EndRef, 4> refs;  // sorted

    DegCrossRatio() = default;
    explicit DegCrossRatio(std::array<EndRef, 4> r);
    explicit DegCrossRatio(const CrossRatio& cr);

    CrossRatio with_default_pairing(std::optional<Rat> len = std::nullopt) const;
};

struct TreeEdge {
    int u = -1;
    int v = -1;
};

// Tree with labeled leaves. Nodes 0..N-1 are the leaves (node l-1 is leaf l);
// nodes N.. are internal. Edges include the leaf edges.
class MarkedTree {
public:
    MarkedTree() = default;
    MarkedTree(int n, int m, int num_nodes, std::vector<TreeEdge> edges);

    int n() const { return n_; }
    int m() const { return m_; }
    int num_leaves() const { return n_ + m_; }
    int num_nodes() const { return num_nodes_; }
    const std::vector<TreeEdge>& edges() const { return edges_; }
    const std::vector<int>& adj(int node) const { return adj_[node]; }
    int degree(int node) const { return static_cast<int>(adj_[node].size()); }

    bool is_leaf_node(int node) const { return node < num_leaves(); }
    int leaf_id(int node) const { return node + 1; }  // valid for leaf nodes
    int node_of_leaf(int leaf) const { return leaf - 1; }
    int node_of_ref(const EndRef& r) const;

    // The unique edge incident to a leaf node.
    int leaf_edge(int leaf) const;
    bool is_end_edge(int e) const;
    // Bounded (internal) edges, in edge-index order.
    const std::vector<int>& bounded_edges() const { return bounded_; }

    int other_end(int e, int node) const;

    // Leaves (as bitmask over leaf ids 1..N, bit l-1) in the component of
    // `toward` after removing edge e (toward must be an endpoint of e).
    std::uint64_t side_mask(int e, int toward) const;

    // Edge at v on the path towards the given leaf.
    int edge_towards(int v, int leaf) const;

    // Nodes on the path between two nodes (inclusive).
    std::vector<int> path_nodes(int a, int b) const;
    // Edge indices on the path between two nodes.
    std::vector<int> path_edges(int a, int b) const;

    // Canonical encoding of the leaf-labeled tree; decorate(e) may append
    // extra per-edge data (e.g. weights) to make richer objects comparable.
    std::string canonical_string(
        const std::function<std::string(int edge)>& decorate = nullptr) const;

private:
    void finalize();

    int n_ = 0;
    int m_ = 0;
    int num_nodes_ = 0;
    std::vector<TreeEdge> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> bounded_;
    std::vector<std::uint64_t> mask_v_;  // leaves on the edges_[e].v side
};

// Sign of edge e for the pairing of cr: +1 if e separates {refs[0],refs[1]}
// from {refs[2],refs[3]}, -1 if it separates {refs[0],refs[3]} from
// {refs[1],refs[2]}, 0 otherwise.
int separation_sign(const MarkedTree& t, int e, const CrossRatio& cr);

// True when the four paths connecting the refs of the 4-set all meet exactly
// in vertex v, i.e. the four directions from v towards the refs are distinct.
bool lambda_at_vertex(const MarkedTree& t, int v, const DegCrossRatio& lam);

// All degenerated cross-ratios from `lams` sitting at v.
std::vector<int> lambda_v(const MarkedTree& t, int v,
                          const std::vector<DegCrossRatio>& lams);

// Checks the constrained-type condition: the lambda_v sets partition the
// given list and every internal vertex has valence 3 + #lambda_v.
bool validate_constrained_type(const MarkedTree& t,
                               const std::vector<DegCrossRatio>& lams,
                               std::string* why = nullptr);

}  // namespace tropcr
