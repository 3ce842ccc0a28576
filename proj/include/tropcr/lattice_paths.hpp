#pragma once

// Cross-ratio lattice path algorithm for the triangle of size d: theta-ordered
// chains of labeled colored polytopes and segments, Minkowski labeled cells,
// subdivision completion by filling turns, color adjustment, cross-ratio fit
// checking, dual curves and the resulting exact counts.

#include "tropcr/degree.hpp"
#include "tropcr/stable_map.hpp"
#include "tropcr/tree.hpp"

#include <array>
#include <string>
#include <vector>

namespace tropcr {

// Exact realization of the order induced by x - eps*y for an infinitesimal
// irrational eps > 0: x ascending, ties broken by y descending.
bool theta_less(const IntVec2& a, const IntVec2& b);

// One entry of the labeling of one edge of a cell, matched to the Minkowski
// summand it comes from.
struct CellLabel {
    int edge = 0;      // polygon edge index; for segment cells 0 is the side
                       // facing the upper region and 1 the lower one
    int value = 1;     // the label (lattice length contributed, dual weight)
    int summand = -1;  // index into Cell::summands, -1 = the non-segment part
};

enum class CellKind {
    Polygon,         // 2-dimensional cell, 2-dimensional non-segment summand
    Parallelogram,   // 2-dimensional cell, 0-dimensional non-segment summand
    PointedSegment,  // segment with 1-dimensional summand carrying a point
    FreeSegment,     // segment whose summands are all segments
};

struct Cell {
    CellKind kind = CellKind::Polygon;
    std::vector<IntVec2> verts;     // CCW polygon vertices, or the 2 segment
                                    // endpoints in theta order
    std::vector<IntVec2> summands;  // full vectors of the segment summands
    std::vector<CellLabel> labels;
    int point = 0;                  // 1-based marked point index, 0 = none

    bool has_dual_vertex() const {
        return kind == CellKind::Polygon || kind == CellKind::PointedSegment;
    }
    int num_edges() const;
    IntVec2 edge_vec(int e) const;      // CCW boundary vector (segments: a->b)
    int ptilde_labels() const;          // labels matched to the non-segment part
    int mark() const;                   // dual vertex valence - 3 (point counts)
    std::vector<int> values_on(int e) const;  // label values of edge e, sorted
    std::string str() const;
};

// Structural invariants: label sums vs lattice lengths, summand matching,
// convexity and kind-specific rules. Throws std::invalid_argument.
void validate_cell(const Cell& c);

// Members of a cross-ratio lattice path in theta order. Pointed members carry
// point = j (the j-th stretched point); the others are free segments.
using LatticePath = std::vector<Cell>;

// All cross-ratio lattice paths in the size-d triangle with n pointed members
// and total mark budget l. Requires n + l == 3d - 1.
std::vector<LatticePath> enumerate_paths(int d, int n, int l);

struct Subdivision {
    std::vector<Cell> cells;  // path members first, in path order
    // shared full edges; for segment cells the side facing the neighbour is
    // stored as the edge index
    std::vector<std::array<int, 4>> glue;  // {cellA, edgeA, cellB, edgeB}
    std::vector<std::array<int, 2>> rim;   // (cell, edge) on the boundary
};

// All completions of a path to subdivisions of the size-d triangle: left
// turns of the upper path and right turns of the lower path are filled with
// valid polytopes, canonically first turn first. l caps the total mark.
std::vector<Subdivision> complete_subdivisions(int d, const LatticePath& path,
                                               int l);

struct DualCurve {
    MarkedTree tree;                // labeled dual curve (valid when is_tree)
    std::vector<int> cell_of_node;  // internal node -> cell index
    bool all_fixed = false;  // color adjustment ends with everything fixed
    bool is_tree = false;    // connected and acyclic (genus zero, irreducible)
    bool fits = false;       // cross-ratios fit (marks match placements)
    std::vector<std::vector<int>> lambda_at;  // per internal node (fit only)
    Int mult_ev = 0;  // product over cells of the fixed-direction determinants
    Int omega = 0;    // resolution weight of the dual curve
    Int mult = 0;     // total multiplicity of the dual curve (cross-checked)
    std::string canonical;  // canonical form of the labeled curve
};

// All gluing choices (bijections g on shared edges and boundary end label
// assignments g') for a subdivision, each with its dual curve and flags.
// Only curves with all_fixed && is_tree && fits && mult > 0 are counted.
std::vector<DualCurve> dual_curves(int d, const Subdivision& s,
                                   const std::vector<DegCrossRatio>& lams);

struct LpaCount {
    Int labeled = 0;    // number of labeled curves, with multiplicity
    Int unlabeled = 0;  // labeled divided by the free end relabelings
    long long paths = 0;
    long long subdivisions = 0;
    long long curves = 0;      // distinct counted curves
    long long collisions = 0;  // duplicates collapsed by deduplication
    std::vector<DualCurve> details;  // counted curves, kept on request
};

LpaCount lpa_count(int d, int n, const std::vector<DegCrossRatio>& lams,
                   bool keep_details = false);

// Stretched configuration: points on a line with small negative slope whose
// consecutive distances grow rapidly.
std::vector<RatVec2> stretched_config(int n);

// The unique positioned curve of a counted combinatorial type through the
// given points; throws when the type is not rigid for that configuration.
StableMap positioned_dual(const MarkedTree& tree, const Degree& deg,
                          const std::vector<RatVec2>& points);

}  // namespace tropcr
