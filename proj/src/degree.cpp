#include "tropcr/degree.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace tropcr {

namespace {

// ccw angle order starting at direction (-1,0).
int ref_halfplane(const IntVec2& v) {
    // 0: exactly (-1,0) ray; 1: strictly below x-axis going ccw from (-1,0)
    // (i.e. y < 0), 2: the (1,0) ray... implemented via transformed atan2
    // ordering without floats: map v to angle class relative to (-1,0).
    if (v.y == 0) return v.x < 0 ? 0 : 2;
    return v.y < 0 ? 1 : 3;
}

bool normal_angle_less(const IntVec2& a, const IntVec2& b) {
    int ha = ref_halfplane(a), hb = ref_halfplane(b);
    if (ha != hb) return ha < hb;
    // same half-plane: compare by cross product (ccw)
    return cross(a, b) > 0;
}

}  // namespace

Degree::Degree(std::vector<DegreeEntry> entries, bool allow_nonspanning)
    : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const DegreeEntry& a, const DegreeEntry& b) {
                  return a.label < b.label;
              });
    IntVec2 sum{0, 0};
    for (int i = 0; i < static_cast<int>(entries_.size()); ++i) {
        if (entries_[i].label != i + 1)
            throw std::invalid_argument(
                "Degree: labels must be exactly 1..k without repeats");
        if (entries_[i].dir.is_zero())
            throw std::invalid_argument("Degree: zero direction vector");
        sum += entries_[i].dir;
    }
    if (!sum.is_zero())
        throw std::invalid_argument("Degree: direction vectors must sum to zero");
    spans_ = false;
    for (size_t i = 0; i + 1 < entries_.size() && !spans_; ++i)
        for (size_t j = i + 1; j < entries_.size() && !spans_; ++j)
            if (cross(entries_[i].dir, entries_[j].dir) != 0) spans_ = true;
    if (!spans_ && !allow_nonspanning)
        throw std::invalid_argument("Degree: vectors must span the plane");
    if (entries_.empty())
        throw std::invalid_argument("Degree: empty");
}

bool Degree::all_primitive() const {
    for (const auto& e : entries_)
        if (gcd_ll(e.dir.x, e.dir.y) != 1) return false;
    return true;
}

Degree delta_d(int d) {
    if (d < 1) throw std::invalid_argument("delta_d: d must be positive");
    std::vector<DegreeEntry> es;
    for (int i = 1; i <= d; ++i) es.push_back({{-1, 0}, i});
    for (int i = 1; i <= d; ++i) es.push_back({{0, -1}, d + i});
    for (int i = 1; i <= d; ++i) es.push_back({{1, 1}, 2 * d + i});
    return Degree(std::move(es));
}

Degree hirzebruch(int s, int b, const std::vector<int>& alpha,
                  const std::vector<int>& beta) {
    if (s < 0 || b < 0 || s + b < 1)
        throw std::invalid_argument("hirzebruch: need s,b >= 0, s+b >= 1");
    auto total = [](const std::vector<int>& p) {
        int t = 0;
        for (int x : p) {
            if (x < 1) throw std::invalid_argument("hirzebruch: partition parts must be positive");
            t += x;
        }
        return t;
    };
    if (total(alpha) != b + s)
        throw std::invalid_argument("hirzebruch: alpha must partition b+s");
    if (total(beta) != b)
        throw std::invalid_argument("hirzebruch: beta must partition b");
    std::vector<DegreeEntry> es;
    int label = 1;
    for (int a : alpha) es.push_back({{-a, 0}, label++});
    for (int x : beta) es.push_back({{x, 0}, label++});
    for (int i = 0; i < s; ++i) es.push_back({{0, -1}, label++});
    for (int i = 0; i < s; ++i) es.push_back({{1, 1}, label++});
    return Degree(std::move(es));
}

Degree degree_from_polytope(const LatticePolytope& sigma,
                            const std::vector<std::vector<int>>& partitions) {
    if (sigma.dim() != 2)
        throw std::invalid_argument("degree_from_polytope: polytope must be 2-dimensional");
    auto fs = sigma.facets();
    if (partitions.size() != fs.size())
        throw std::invalid_argument("degree_from_polytope: one partition per facet required");
    for (size_t i = 0; i < fs.size(); ++i) {
        long long t = 0;
        for (int x : partitions[i]) {
            if (x < 1)
                throw std::invalid_argument("degree_from_polytope: partition parts must be positive");
            t += x;
        }
        if (t != fs[i].length)
            throw std::invalid_argument(
                "degree_from_polytope: partition must sum to the facet lattice length");
    }
    // order facets by ccw normal angle from (-1,0)
    std::vector<size_t> order(fs.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
        return normal_angle_less(fs[i].normal, fs[j].normal);
    });
    std::vector<DegreeEntry> es;
    int label = 1;
    for (size_t i : order)
        for (int x : partitions[i])
            es.push_back({fs[i].normal * x, label++});
    return Degree(std::move(es));
}

LatticePolytope polytope_of_degree(const Degree& deg) {
    if (!deg.spans())
        throw std::invalid_argument("polytope_of_degree: degree must span the plane");
    std::map<IntVec2, long long, bool (*)(const IntVec2&, const IntVec2&)> sides(
        normal_angle_less);
    for (const auto& e : deg.entries()) {
        auto [u, w] = primitive_direction(e.dir);
        sides[u] += w;
    }
    std::vector<IntVec2> pts;
    IntVec2 cur{0, 0};
    pts.push_back(cur);
    for (const auto& [nrm, len] : sides) {
        IntVec2 edge{-nrm.y, nrm.x};  // normal rotated +90 = ccw edge direction
        cur += edge * len;
        pts.push_back(cur);
    }
    if (!cur.is_zero())
        throw std::invalid_argument("polytope_of_degree: degree does not close up");
    IntVec2 mn = *std::min_element(pts.begin(), pts.end());
    for (auto& p : pts) p -= mn;
    return LatticePolytope(pts);
}

}  // namespace tropcr
