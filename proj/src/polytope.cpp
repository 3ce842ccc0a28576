#include "tropcr/polytope.hpp"

#include <algorithm>
#include <set>

namespace tropcr {

namespace {

// Monotone chain hull, collinear points dropped, ccw orientation.
std::vector<IntVec2> hull_of(std::vector<IntVec2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    auto build = [&](auto begin, auto end) {
        std::vector<IntVec2> chain;
        for (auto it = begin; it != end; ++it) {
            while (chain.size() >= 2 &&
                   cross(chain.back() - chain[chain.size() - 2],
                         *it - chain.back()) <= 0)
                chain.pop_back();
            chain.push_back(*it);
        }
        return chain;
    };
    std::vector<IntVec2> lower = build(pts.begin(), pts.end());
    std::vector<IntVec2> upper = build(pts.rbegin(), pts.rend());
    if (lower.size() == pts.size() && upper.size() == pts.size() &&
        lower.size() >= 2 && cross(lower[1] - lower[0], pts.back() - pts[0]) == 0) {
        // all collinear
        return {pts.front(), pts.back()};
    }
    lower.pop_back();
    upper.pop_back();
    lower.insert(lower.end(), upper.begin(), upper.end());
    return lower;
}

}  // namespace

LatticePolytope::LatticePolytope(std::vector<IntVec2> points) {
    verts_ = hull_of(std::move(points));
    if (verts_.size() >= 3) {
        // rotate so the lex-min vertex comes first
        auto it = std::min_element(verts_.begin(), verts_.end());
        std::rotate(verts_.begin(), it, verts_.end());
    }
}

int LatticePolytope::dim() const {
    if (verts_.empty()) return -1;
    if (verts_.size() == 1) return 0;
    if (verts_.size() == 2) return 1;
    return 2;
}

std::vector<Facet> LatticePolytope::facets() const {
    std::vector<Facet> out;
    if (dim() != 2) return out;
    size_t k = verts_.size();
    for (size_t i = 0; i < k; ++i) {
        const IntVec2& a = verts_[i];
        const IntVec2& b = verts_[(i + 1) % k];
        IntVec2 e = b - a;
        auto [u, w] = primitive_direction(e);
        // outward normal for ccw orientation: rotate edge direction by -90
        IntVec2 nrm{u.y, -u.x};
        out.push_back(Facet{a, b, nrm, w});
    }
    return out;
}

std::vector<IntVec2> LatticePolytope::lattice_points() const {
    std::vector<IntVec2> out;
    if (verts_.empty()) return out;
    long long xmin = verts_[0].x, xmax = xmin, ymin = verts_[0].y, ymax = ymin;
    for (const auto& v : verts_) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    for (long long x = xmin; x <= xmax; ++x)
        for (long long y = ymin; y <= ymax; ++y)
            if (contains({x, y})) out.push_back({x, y});
    return out;
}

bool LatticePolytope::contains(const IntVec2& p) const {
    if (verts_.empty()) return false;
    if (verts_.size() == 1) return p == verts_[0];
    if (verts_.size() == 2) {
        IntVec2 d = verts_[1] - verts_[0];
        IntVec2 q = p - verts_[0];
        if (cross(d, q) != 0) return false;
        long long t = dot(d, q);
        return t >= 0 && t <= dot(d, d);
    }
    size_t k = verts_.size();
    for (size_t i = 0; i < k; ++i) {
        if (cross(verts_[(i + 1) % k] - verts_[i], p - verts_[i]) < 0)
            return false;
    }
    return true;
}

bool LatticePolytope::contains_interior(const IntVec2& p) const {
    if (dim() != 2) return false;
    size_t k = verts_.size();
    for (size_t i = 0; i < k; ++i) {
        if (cross(verts_[(i + 1) % k] - verts_[i], p - verts_[i]) <= 0)
            return false;
    }
    return true;
}

}  // namespace tropcr
