#pragma once

// Exact arithmetic scalars and primitive planar lattice geometry shared by
// every module. All counting paths work over arbitrary-precision integers
// and rationals; no floating point appears anywhere.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tropcr {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Integer vector in the plane. Coordinates stay tiny (directions of tropical
// curve edges are sums of a handful of degree vectors), so machine integers
// suffice; overflow is structurally impossible for the sizes we enumerate.
struct IntVec2 {
    long long x = 0;
    long long y = 0;

    IntVec2() = default;
    IntVec2(long long px, long long py) : x(px), y(py) {}

    IntVec2 operator+(const IntVec2& o) const { return {x + o.x, y + o.y}; }
    IntVec2 operator-(const IntVec2& o) const { return {x - o.x, y - o.y}; }
    IntVec2 operator-() const { return {-x, -y}; }
    IntVec2 operator*(long long s) const { return {x * s, y * s}; }
    IntVec2& operator+=(const IntVec2& o) { x += o.x; y += o.y; return *this; }
    IntVec2& operator-=(const IntVec2& o) { x -= o.x; y -= o.y; return *this; }

    bool operator==(const IntVec2& o) const { return x == o.x && y == o.y; }
    bool operator!=(const IntVec2& o) const { return !(*this == o); }
    bool operator<(const IntVec2& o) const {
        return x != o.x ? x < o.x : y < o.y;
    }

    bool is_zero() const { return x == 0 && y == 0; }

    std::string str() const {
        return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
    }
};

inline long long cross(const IntVec2& a, const IntVec2& b) {
    return a.x * b.y - a.y * b.x;
}

inline long long dot(const IntVec2& a, const IntVec2& b) {
    return a.x * b.x + a.y * b.y;
}

inline long long gcd_ll(long long a, long long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Primitive vector u and weight w with v = w * u, w > 0. Throws on the zero
// vector: callers that can legitimately meet zero directions check first.
inline std::pair<IntVec2, long long> primitive_direction(const IntVec2& v) {
    if (v.is_zero())
        throw std::invalid_argument("primitive_direction: zero vector");
    long long g = gcd_ll(v.x, v.y);
    return {IntVec2{v.x / g, v.y / g}, g};
}

// Number of lattice points on the segment [a,b] minus one.
inline long long lattice_length(const IntVec2& a, const IntVec2& b) {
    IntVec2 d = b - a;
    if (d.is_zero()) return 0;
    return gcd_ll(d.x, d.y);
}

// Exact rational point in the plane.
struct RatVec2 {
    Rat x;
    Rat y;

    RatVec2() = default;
    RatVec2(Rat px, Rat py) : x(std::move(px)), y(std::move(py)) {}
    RatVec2(const IntVec2& v) : x(v.x), y(v.y) {}

    RatVec2 operator+(const RatVec2& o) const { return {x + o.x, y + o.y}; }
    RatVec2 operator-(const RatVec2& o) const { return {x - o.x, y - o.y}; }
    bool operator==(const RatVec2& o) const { return x == o.x && y == o.y; }
    bool operator<(const RatVec2& o) const {
        return x != o.x ? x < o.x : y < o.y;
    }
};

inline RatVec2 operator*(const Rat& s, const IntVec2& v) {
    return {s * v.x, s * v.y};
}

inline std::string rat_str(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

}  // namespace tropcr

template <>
struct std::hash<tropcr::IntVec2> {
    size_t operator()(const tropcr::IntVec2& v) const {
        return std::hash<long long>()(v.x * 1000003LL + v.y);
    }
};
