#pragma once

// Cross-ratio floor diagrams: weighted trees on an ordered vertex set (one
// vertex per point condition) with per-vertex floor sizes, horizontal end
// counts and thick/thin half-edge structure. Counting diagrams weighted by
// the product of their piece multiplicities reproduces the count of plane
// curves of degree d through n points satisfying degenerated cross-ratio
// conditions whose entries are all marked points.

#include "tropcr/oracle.hpp"

#include <map>
#include <optional>

namespace tropcr {

struct FloorDiagram {
    int d = 0;
    int n = 0;
    std::vector<std::array<int, 2>> edges;  // (u,v) with u < v, directed u->v
    std::vector<long long> weight;          // elevator weight per edge (>= 1)
    std::vector<int> size_v;                // floor size s_v, sum = d
    std::vector<int> ends_v;                // # horizontal end labels a_v, sum = d
    std::vector<bool> thick_at_min;         // thick half-edge at the smaller vertex
    std::vector<int> lambda_vertex;         // vertex satisfying each cross-ratio

    // Number of adjacent tree edges whose half-edge at v is thick. Horizontal
    // ends always count as thick, which yields this closed form.
    int thick_count(int v) const;
    int lambda_count(int v) const;
    std::string str() const;
};

// Checks all diagram axioms: tree shape, flow balance of the weights,
// thick/thin structure matching the per-vertex thick counts, size and end
// sums, and the cross-ratio placement. Throws on violation.
void validate_diagram(const FloorDiagram& f,
                      const std::vector<DegCrossRatio>& lams);

// The vertex each cross-ratio is satisfied at (paths of one pair split meet
// the other pair's path in exactly one vertex), or nullopt when some
// cross-ratio is not satisfied by the tree.
std::optional<std::vector<int>> lambda_vertices(
    int n, const std::vector<std::array<int, 2>>& edges,
    const std::vector<DegCrossRatio>& lams);

// Counting problems for the pieces of a diagram: every vertex is cut out
// with its adjacent elevators as horizontal ends; thin half-edges become end
// height conditions, cross-ratios at the vertex are rewritten to the cut
// ends. end_of_edge maps a diagram edge to the end label in the piece degree.
struct FloorPieces {
    std::vector<OracleProblem> probs;
    std::vector<std::map<int, int>> end_of_edge;
};
FloorPieces diagram_pieces(const FloorDiagram& f,
                           const std::vector<DegCrossRatio>& lams);

using PieceMemo = std::map<std::string, Int>;

// Product of the piece multiplicities (each computed by the enumeration
// oracle, cached in memo, and checked to be configuration-independent).
Int diagram_multiplicity(const FloorDiagram& f,
                         const std::vector<DegCrossRatio>& lams, unsigned seed,
                         PieceMemo* memo = nullptr);

// Number of ways to distribute the 3d degree labels onto the vertices
// respecting the counts a_v and s_v: d!/prod(a_v!) * (d!/prod(s_v!))^2.
Int label_distribution_factor(const FloorDiagram& f);

struct FloorCount {
    Int total = 0;
    long long diagrams = 0;  // diagrams with nonzero multiplicity
    std::vector<std::pair<FloorDiagram, Int>> contributions;  // kept on request
};

// Total over all cross-ratio floor diagrams of degree d on n ordered
// vertices satisfying the given (all-point-entry) cross-ratios, each
// counted with multiplicity times its label distribution factor.
// Requires n + #lams == 3d - 1.
FloorCount floor_count(int d, int n, const std::vector<DegCrossRatio>& lams,
                       unsigned seed, bool keep_diagrams = false);

}  // namespace tropcr
