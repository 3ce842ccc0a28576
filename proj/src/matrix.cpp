#include "tropcr/matrix.hpp"

#include <stdexcept>

namespace tropcr {

Rat MatQ::det() const {
    if (r_ != c_) throw std::invalid_argument("MatQ::det: matrix not square");
    MatQ m = *this;
    Rat d(1);
    for (int k = 0; k < r_; ++k) {
        int piv = -1;
        for (int i = k; i < r_; ++i)
            if (m.at(i, k) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return Rat(0);
        if (piv != k) {
            for (int j = k; j < c_; ++j) std::swap(m.at(piv, j), m.at(k, j));
            d = -d;
        }
        d *= m.at(k, k);
        for (int i = k + 1; i < r_; ++i) {
            if (m.at(i, k) == 0) continue;
            Rat f = m.at(i, k) / m.at(k, k);
            for (int j = k; j < c_; ++j) m.at(i, j) -= f * m.at(k, j);
        }
    }
    return d;
}

std::optional<std::vector<Rat>> MatQ::solve(const std::vector<Rat>& b) const {
    if (r_ != c_ || static_cast<int>(b.size()) != r_)
        throw std::invalid_argument("MatQ::solve: dimension mismatch");
    MatQ m = *this;
    std::vector<Rat> rhs = b;
    for (int k = 0; k < r_; ++k) {
        int piv = -1;
        for (int i = k; i < r_; ++i)
            if (m.at(i, k) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return std::nullopt;
        if (piv != k) {
            for (int j = k; j < c_; ++j) std::swap(m.at(piv, j), m.at(k, j));
            std::swap(rhs[piv], rhs[k]);
        }
        for (int i = k + 1; i < r_; ++i) {
            if (m.at(i, k) == 0) continue;
            Rat f = m.at(i, k) / m.at(k, k);
            for (int j = k; j < c_; ++j) m.at(i, j) -= f * m.at(k, j);
            rhs[i] -= f * rhs[k];
        }
    }
    std::vector<Rat> x(r_);
    for (int i = r_ - 1; i >= 0; --i) {
        Rat s = rhs[i];
        for (int j = i + 1; j < r_; ++j) s -= m.at(i, j) * x[j];
        x[i] = s / m.at(i, i);
    }
    return x;
}

}  // namespace tropcr
