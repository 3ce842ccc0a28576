#pragma once

// Small dense exact rational matrices: just enough linear algebra (determinant
// and solving square systems by fraction-free-safe rational elimination) for
// the evaluation/forgetful maps. Everything is exact.

#include "tropcr/core.hpp"

#include <optional>
#include <vector>

namespace tropcr {

class MatQ {
public:
    MatQ() = default;
    MatQ(int rows, int cols) : r_(rows), c_(cols), a_(rows * cols, Rat(0)) {}

    int rows() const { return r_; }
    int cols() const { return c_; }
    Rat& at(int i, int j) { return a_[i * c_ + j]; }
    const Rat& at(int i, int j) const { return a_[i * c_ + j]; }

    // Determinant (square only).
    Rat det() const;

    // Solution of A x = b for square A; nullopt when singular.
    std::optional<std::vector<Rat>> solve(const std::vector<Rat>& b) const;

private:
    int r_ = 0, c_ = 0;
    std::vector<Rat> a_;
};

}  // namespace tropcr
