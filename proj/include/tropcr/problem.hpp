#pragma once

// Problem files, algorithm dispatch with cross-checking, and report emission
// (json / dot / human-readable listing).

#include "tropcr/degree.hpp"
#include "tropcr/tree.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tropcr {

// Raised when a problem exceeds the desk-scale budget of an algorithm.
struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when cross-check mode finds disagreeing algorithms.
struct CrossCheckMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProblemFile {
    Degree degree;
    std::string degree_spec;  // normalized json of the degree block
    int n = 0;
    std::vector<CrossRatio> cross;         // finite positive length
    std::vector<DegCrossRatio> deg_cross;  // degenerated
    unsigned seed = 1;

    bool operator==(const ProblemFile& o) const;
};

// Parses and validates a json problem file. Errors (std::invalid_argument):
// "unresolved reference" for refs outside the degree / point range,
// "condition count mismatch" when n + #cross_ratios != |degree| - 1,
// "degenerate cross-ratio" for repeated refs within one cross-ratio.
ProblemFile parse_problem(const std::string& text);

// Canonical json of a problem; parse_problem(problem_to_json(p)) == p.
std::string problem_to_json(const ProblemFile& p);

struct ObjectRecord {
    std::string kind;     // "curve" or "floor-diagram"
    std::string summary;  // canonical combinatorial description
    Int mult = 0;
    Int mult_ev = 0;  // evaluation factor (point/determinant part)
    Int omega = 0;    // resolution weight factor
    std::string dot;  // graphviz rendering of the object
};

struct ResultReport {
    std::string algorithm;
    Int count = 0;           // labeled count
    Int unlabeled = 0;       // count / relabel_factor when divisible, else 0
    Int relabel_factor = 1;  // free end relabelings
    unsigned seed = 1;
    long long millis = 0;
    std::vector<ObjectRecord> objects;  // kept when requested
    // per-algorithm totals in cross-check mode
    std::vector<std::pair<std::string, Int>> cross_results;
};

// algorithm: "oracle", "lattice-path", "floor" or "cross-check" (runs every
// applicable algorithm and throws CrossCheckMismatch on disagreement).
// Throws std::invalid_argument when the algorithm does not apply and
// ResourceLimit when the instance is too large for it.
ResultReport run_count(const ProblemFile& p, const std::string& algorithm,
                       bool with_objects = false);

// canonical = true drops the timing field so identical inputs emit
// byte-identical output.
std::string emit_json(const ProblemFile& p, const ResultReport& r,
                      bool canonical = false);
std::string emit_listing(const ResultReport& r);
std::string emit_dot(const ResultReport& r);

}  // namespace tropcr
