#pragma once

// Degrees of plane tropical curves: labeled multisets of integer direction
// vectors summing to zero. Labels are 1..|degree| and index the non-contracted
// ends of a curve.

#include "tropcr/core.hpp"
#include "tropcr/polytope.hpp"

#include <vector>

namespace tropcr {

struct DegreeEntry {
    IntVec2 dir;  // full (weighted) direction vector of the end
    int label;    // 1-based, unique
};

class Degree {
public:
    Degree() = default;

    // Entries are stored sorted by label; labels must be exactly 1..k.
    // Vectors must sum to zero and (unless allow_nonspanning, used internally
    // for floor pieces) span the plane.
    explicit Degree(std::vector<DegreeEntry> entries, bool allow_nonspanning = false);

    int size() const { return static_cast<int>(entries_.size()); }
    const std::vector<DegreeEntry>& entries() const { return entries_; }
    const IntVec2& dir(int label) const { return entries_.at(label - 1).dir; }
    bool spans() const { return spans_; }

    // True when every entry is primitive (weight one).
    bool all_primitive() const;

private:
    std::vector<DegreeEntry> entries_;
    bool spans_ = false;
};

// Degree of plane curves of degree d dual to the triangle with legs d:
// labels 1..d are (-1,0), d+1..2d are (0,-1), 2d+1..3d are (1,1).
Degree delta_d(int d);

// Hirzebruch-surface degree for the trapezoid conv{(0,0),(s,0),(s,b),(0,b+s)}.
// alpha partitions b+s (ends (-alpha_i,0), labels 1..len(alpha)); beta
// partitions b (ends (beta_i,0), labels len(alpha)+1..len(alpha)+len(beta));
// then s ends (0,-1) and s ends (1,1) take the remaining labels in that order.
Degree hirzebruch(int s, int b, const std::vector<int>& alpha,
                  const std::vector<int>& beta);

// Degree read off a 2-dimensional lattice polytope: facet i contributes
// entries partition[i][j] * (outward primitive normal). Facets are indexed in
// ccw order starting at the lex-min vertex; labels are assigned facet group by
// facet group ordered by the ccw angle of the outward normal measured from
// (-1,0), entries of one facet in partition order.
Degree degree_from_polytope(const LatticePolytope& sigma,
                            const std::vector<std::vector<int>>& partitions);

// The polytope dual to a degree (up to translation; normalized so the lex-min
// vertex is the origin). Requires a spanning degree.
LatticePolytope polytope_of_degree(const Degree& deg);

}  // namespace tropcr
