#pragma once

// Convex lattice polytopes in the plane (possibly degenerate: points and
// segments), stored with vertices in counterclockwise order starting at the
// lexicographically smallest vertex.

#include "tropcr/core.hpp"

#include <optional>
#include <vector>

namespace tropcr {

struct Facet {
    IntVec2 a;        // tail (ccw order)
    IntVec2 b;        // head
    IntVec2 normal;   // outward primitive normal
    long long length; // lattice length
};

class LatticePolytope {
public:
    LatticePolytope() = default;

    // Convex hull of the given points; duplicates allowed.
    explicit LatticePolytope(std::vector<IntVec2> points);

    int dim() const;  // 0, 1 or 2 (-1 when empty)

    const std::vector<IntVec2>& vertices() const { return verts_; }

    // Facets in ccw order starting at the lex-min vertex (dim 2 only).
    std::vector<Facet> facets() const;

    std::vector<IntVec2> lattice_points() const;

    bool contains(const IntVec2& p) const;

    // Strictly inside (dim 2 only; false otherwise).
    bool contains_interior(const IntVec2& p) const;

    bool operator==(const LatticePolytope& o) const { return verts_ == o.verts_; }
    bool operator<(const LatticePolytope& o) const { return verts_ < o.verts_; }

private:
    std::vector<IntVec2> verts_;
};

}  // namespace tropcr
