#pragma once

// Rational tropical stable maps to the plane: a marked tree together with a
// degree (fixing the directions of the non-contracted ends), optional bounded
// edge lengths and an anchor position h(x_1).

#include "tropcr/degree.hpp"
#include "tropcr/tree.hpp"

#include <optional>

namespace tropcr {

struct StableMap {
    MarkedTree tree;
    Degree degree;                       // degree.size() == tree.m()
    std::optional<RatVec2> anchor;       // h(x_1)
    std::vector<Rat> edge_length;        // indexed by edge; ends get 0

    StableMap() = default;
    StableMap(MarkedTree t, Degree d);

    // Full (weighted) direction of edge e, traversed from `from` towards the
    // other endpoint: the sum of the end vectors on the far side. Zero for a
    // direction-degenerate bounded edge.
    IntVec2 edge_dir(int e, int from) const;

    // Weight of an edge (gcd of the direction; 0 for contracted edges).
    long long weight(int e) const;

    bool has_geometry() const { return anchor.has_value(); }

    // Position of a node (requires anchor and lengths on all bounded edges).
    RatVec2 position(int node) const;

    // Position of the vertex a marked point / end attaches to.
    RatVec2 position_of_ref(const EndRef& r) const;

    std::string canonical_string() const;
};

// Directions of all edges given tree + degree, oriented u -> v as stored.
std::vector<IntVec2> directions_from_degree(const MarkedTree& t, const Degree& d);

// Signed tropical cross-ratio length of the curve for the stored pairing:
// sum over bounded edges of separation_sign * length.
Rat cross_ratio_value(const StableMap& c, const CrossRatio& cr);

struct FloorsElevators {
    std::vector<int> elevator_edges;   // bounded edges parallel to (1,0)
    std::vector<int> horizontal_ends;  // end edges parallel to (1,0)
    std::vector<std::vector<int>> floors;  // node sets (internal + leaf nodes)
    std::vector<int> floor_of_node;        // -1 for nodes cut away entirely
    std::vector<int> floor_sizes;          // # ends parallel to (1,1) per floor
    bool is_floor_decomposed = false;      // exactly one marked point per floor
};

// Decomposition into floors and elevators: elevators are the edges parallel
// to (1,0); floors are the components left after removing their interiors.
FloorsElevators floors_and_elevators(const StableMap& c);

// Simplicity of a positioned curve: vertices have distinct images; a vertex
// lying on the image of a non-adjacent edge only happens along collinear
// overlaps that continue through the vertex; through any point of the plane
// pass at most two slope classes of edges.
bool is_simple(const StableMap& c);

}  // namespace tropcr
