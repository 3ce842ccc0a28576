#pragma once

// Definition-level counting oracle: enumerates all trivalent leaf-labeled
// combinatorial types of a given degree, solves the point / end-height /
// cross-ratio conditions exactly over the rationals for a random (seeded,
// integral) configuration in general position and sums |det| multiplicities.

#include "tropcr/multiplicity.hpp"
#include "tropcr/stable_map.hpp"

#include <vector>

namespace tropcr {

struct OracleProblem {
    Degree degree;
    int n = 0;                          // number of marked points (>= 1)
    std::vector<int> dev;               // labels of ends with fixed heights
    std::vector<CrossRatio> cross;      // cross-ratios with finite length
    std::vector<DegCrossRatio> deg_cross;  // degenerated cross-ratios

    // Requires n + #dev + #cross + #deg_cross == |degree| - 1 (the condition
    // matrix of every trivalent type is square) and valid references.
    void validate() const;

    // All cross-ratio conditions in row order: the finite-length ones
    // followed by the degenerated ones realized with the default pairing and
    // pairwise distinct small lengths (the count does not depend on them).
    std::vector<CrossRatio> realized_cross() const;
};

struct OracleConfig {
    std::vector<RatVec2> points;   // images of x_1..x_n
    std::vector<Rat> heights;      // fixed y-values, parallel to dev
};

struct OracleSolution {
    StableMap curve;  // positioned: anchor and positive edge lengths set
    Int mult;
};

struct OracleResult {
    std::vector<OracleSolution> curves;
    Int total = 0;
    OracleConfig config;
    int resamples = 0;            // configurations rejected as non-generic
    long long trees_enumerated = 0;
};

// Solves the problem for a configuration derived from `seed`, resampling (at
// most 32 times) when the configuration turns out non-generic.
OracleResult oracle_solve(const OracleProblem& p, unsigned seed);

// Solves for an explicit configuration (no resampling; throws when the
// configuration is non-generic for some combinatorial type).
OracleResult oracle_solve(const OracleProblem& p, const OracleConfig& cfg);

Int oracle_count(const OracleProblem& p, unsigned seed);

}  // namespace tropcr
