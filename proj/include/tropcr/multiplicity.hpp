#pragma once

// Multiplicities of tropical curves satisfying point and cross-ratio
// conditions: the evaluation/forgetful condition matrix, the equivalent
// chain-complex determinant, the fixed/free branch classification with local
// vertex multiplicities, and recursive resolution weights for degenerated
// cross-ratios.

#include "tropcr/matrix.hpp"
#include "tropcr/stable_map.hpp"

#include <vector>

namespace tropcr {

// Condition matrix of a combinatorial type: columns are the two anchor
// coordinates followed by the bounded edge lengths (in bounded_edges() order);
// rows are two per marked point, one per end height condition (dev: labels of
// conditioned ends) and one per (non-degenerated) cross-ratio.
struct EvFtMatrix {
    MatQ mat;
    std::vector<int> bounded;            // column order (edge ids after anchor)
    std::vector<std::string> row_desc;
};

EvFtMatrix ev_ft_matrix(const StableMap& c, const std::vector<int>& dev,
                        const std::vector<CrossRatio>& crs);

// Determinant of the chain-complex map equivalent to the condition matrix for
// marked points + cross-ratios (no end height conditions): vertex position
// generators and edge length generators mapped to per-edge position jumps,
// point evaluations and cross-ratio sums.
Rat theta_matrix_det(const StableMap& c, const std::vector<CrossRatio>& crs);

enum class BranchClass { Fixed, Free, ContractedEnd, Unbalanced };

struct BranchInfo {
    int edge = -1;
    BranchClass cls = BranchClass::Free;
    IntVec2 dir;      // weighted direction pointing away from the vertex
    int ends = 0;     // reachable non-contracted ends incl. the stretched cut
    int conditions = 0;  // reachable points + degenerated cross-ratios
};

// Classification of the branches at vertex v after cutting each adjacent
// edge: a branch is fixed when ends-1 == conditions, free when
// ends-2 == conditions (Unbalanced flags anything else; such a curve is not
// fixed by the conditions).
std::vector<BranchInfo> classify_components(const StableMap& c,
                                            const std::vector<DegCrossRatio>& lams,
                                            int v);

// Local evaluation multiplicity of vertex v: 1 when a marked point sits on v,
// otherwise |det| of the two fixed branch directions. Returns 0 when the
// branch classification does not yield exactly two fixed branches.
Int local_ev_mult(const StableMap& c, const std::vector<DegCrossRatio>& lams,
                  int v);

// A degenerated cross-ratio localized at a vertex star: entries are indices
// of the star's edges, with the pairing (p[0] p[1] | p[2] p[3]).
struct LocalCross {
    std::array<int, 4> p;
};

// Recursive resolution weight of a single vertex star: the number of ways to
// resolve a (3+r)-valent vertex carrying the ordered cross-ratios into
// trivalent vertices, resolving along the first cross-ratio's pairing at each
// step. Stars with at most one cross-ratio weigh 1.
Int local_resolution_weight(const std::vector<int>& star_edges,
                            const std::vector<LocalCross>& lams);

// Resolution weight of vertex v of a curve for the given ordered pairings.
Int resolution_weight_at_vertex(const StableMap& c,
                                const std::vector<CrossRatio>& pairings, int v);

// Total multiplicity: product over vertices of local_ev_mult times the
// resolution weight (pairings listed in degeneration order; lengths ignored).
Int total_multiplicity(const StableMap& c, const std::vector<CrossRatio>& pairings);

}  // namespace tropcr
