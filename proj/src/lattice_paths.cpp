#include "tropcr/lattice_paths.hpp"

#include "tropcr/matrix.hpp"
#include "tropcr/multiplicity.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

namespace tropcr {

bool theta_less(const IntVec2& a, const IntVec2& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y > b.y;
}

namespace {

IntVec2 rot_plus90(const IntVec2& v) { return {-v.y, v.x}; }
IntVec2 rot_minus90(const IntVec2& v) { return {v.y, -v.x}; }

std::vector<IntVec2> sigma_points(int d) {
    std::vector<IntVec2> pts;
    for (long long x = 0; x <= d; ++x)
        for (long long y = 0; x + y <= d; ++y) pts.push_back({x, y});
    std::sort(pts.begin(), pts.end(), theta_less);
    return pts;
}

// Boundary leg of the segment [a,b]: 0 = left (x=0), 1 = bottom (y=0),
// 2 = hypotenuse, -1 = not contained in the boundary.
int boundary_class(const IntVec2& a, const IntVec2& b, int d) {
    if (a.x == 0 && b.x == 0) return 0;
    if (a.y == 0 && b.y == 0) return 1;
    if (a.x + a.y == d && b.x + b.y == d) return 2;
    return -1;
}

// All partitions of n into unordered positive parts, descending within each.
std::vector<std::vector<int>> partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rest, int maxpart) -> void {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(rest, maxpart); p >= 1; --p) {
            cur.push_back(p);
            self(self, rest - p, p);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

long long poly_edge_len(const Cell& c, int e) {
    IntVec2 v = c.edge_vec(e);
    return gcd_ll(v.x, v.y);
}

}  // namespace

int Cell::num_edges() const {
    if (kind == CellKind::PointedSegment || kind == CellKind::FreeSegment)
        return 2;
    return static_cast<int>(verts.size());
}

IntVec2 Cell::edge_vec(int e) const {
    if (kind == CellKind::PointedSegment || kind == CellKind::FreeSegment)
        return verts[1] - verts[0];
    int k = static_cast<int>(verts.size());
    return verts[(e + 1) % k] - verts[e];
}

int Cell::ptilde_labels() const {
    int c = 0;
    for (const CellLabel& l : labels)
        if (l.summand < 0) ++c;
    return c;
}

int Cell::mark() const {
    if (!has_dual_vertex()) return 0;
    return ptilde_labels() + (point > 0 ? 1 : 0) - 3;
}

std::vector<int> Cell::values_on(int e) const {
    std::vector<int> out;
    for (const CellLabel& l : labels)
        if (l.edge == e) out.push_back(l.value);
    std::sort(out.begin(), out.end());
    return out;
}

std::string Cell::str() const {
    std::string s;
    switch (kind) {
        case CellKind::Polygon: s = "poly"; break;
        case CellKind::Parallelogram: s = "pgram"; break;
        case CellKind::PointedSegment: s = "pseg"; break;
        case CellKind::FreeSegment: s = "fseg"; break;
    }
    for (const IntVec2& v : verts) s += v.str();
    for (const IntVec2& v : summands) s += "+s" + v.str();
    for (const CellLabel& l : labels)
        s += " e" + std::to_string(l.edge) + ":" + std::to_string(l.value) +
             (l.summand >= 0 ? "s" + std::to_string(l.summand) : "");
    if (point > 0) s += " x" + std::to_string(point);
    return s;
}

void validate_cell(const Cell& c) {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("cell " + c.str() + ": " + why);
    };
    if (c.point > 0 && !c.has_dual_vertex()) fail("point on a free cell");
    if (c.kind == CellKind::PointedSegment || c.kind == CellKind::FreeSegment) {
        if (c.verts.size() != 2) fail("segment needs 2 endpoints");
        if (!theta_less(c.verts[0], c.verts[1])) fail("endpoints not in order");
        if (c.kind == CellKind::PointedSegment && c.point == 0)
            fail("pointed segment without point");
        IntVec2 u = c.verts[1] - c.verts[0];
        long long L = gcd_ll(u.x, u.y);
        long long sum_s = 0;
        for (const IntVec2& s : c.summands) {
            if (cross(s, u) != 0 || s.is_zero()) fail("summand not parallel");
            sum_s += gcd_ll(s.x, s.y);
        }
        long long L0 = L - sum_s;
        if (c.kind == CellKind::FreeSegment && L0 != 0)
            fail("free segment with a non-segment part");
        if (c.kind == CellKind::PointedSegment && L0 < 1)
            fail("pointed segment part must have positive length");
        for (int side = 0; side < 2; ++side) {
            long long sum = 0, sum_pt = 0;
            std::vector<int> seen(c.summands.size(), 0);
            for (const CellLabel& l : c.labels) {
                if (l.edge != side) continue;
                if (l.value < 1) fail("label values are positive");
                sum += l.value;
                if (l.summand < 0) {
                    sum_pt += l.value;
                } else {
                    if (l.summand >= static_cast<int>(c.summands.size()))
                        fail("summand index out of range");
                    IntVec2 s = c.summands[l.summand];
                    if (l.value != gcd_ll(s.x, s.y))
                        fail("summand label must equal its length");
                    ++seen[l.summand];
                }
            }
            if (sum != L) fail("side labels must sum to the lattice length");
            if (sum_pt != L0) fail("non-segment labels must sum to its length");
            for (int k : seen)
                if (k != 1) fail("each summand labels each side once");
        }
        return;
    }
    // polygon kinds
    int k = static_cast<int>(c.verts.size());
    if (k < 3) fail("polygon needs >= 3 vertices");
    for (int i = 0; i < k; ++i)
        if (cross(c.edge_vec(i), c.edge_vec((i + 1) % k)) <= 0)
            fail("vertices must be strictly convex ccw");
    std::vector<long long> red(k, 0);  // length taken by summands per edge
    std::vector<int> uses(c.summands.size(), 0);
    for (const CellLabel& l : c.labels) {
        if (l.edge < 0 || l.edge >= k) fail("label edge out of range");
        if (l.value < 1) fail("label values are positive");
        if (l.summand >= 0) {
            if (l.summand >= static_cast<int>(c.summands.size()))
                fail("summand index out of range");
            IntVec2 s = c.summands[l.summand];
            if (cross(s, c.edge_vec(l.edge)) != 0)
                fail("summand must be parallel to its edges");
            if (l.value != gcd_ll(s.x, s.y))
                fail("summand label must equal its length");
            red[l.edge] += l.value;
            ++uses[l.summand];
        }
    }
    for (int u : uses)
        if (u != 2) fail("each summand labels exactly two opposite edges");
    int dim_dirs = 0;
    std::vector<IntVec2> dirs;
    for (int e = 0; e < k; ++e) {
        long long len = poly_edge_len(c, e);
        long long sum = 0;
        for (int v : c.values_on(e)) sum += v;
        if (sum != len) fail("edge labels must sum to the lattice length");
        long long rest = len - red[e];
        long long sum_pt = 0;
        for (const CellLabel& l : c.labels)
            if (l.edge == e && l.summand < 0) sum_pt += l.value;
        if (sum_pt != rest) fail("non-segment labels must fill the edge rest");
        if (rest > 0) {
            IntVec2 p = primitive_direction(c.edge_vec(e)).first;
            if (p.x < 0 || (p.x == 0 && p.y < 0)) p = -p;
            bool fresh = true;
            for (const IntVec2& q : dirs) fresh = fresh && !(q == p);
            if (fresh) {
                dirs.push_back(p);
                ++dim_dirs;
            }
        }
    }
    if (c.kind == CellKind::Polygon && dim_dirs < 2)
        fail("non-segment part must be 2-dimensional");
    if (c.kind == CellKind::Parallelogram && dim_dirs != 0)
        fail("parallelogram cells have a 0-dimensional non-segment part");
    if (c.kind == CellKind::Parallelogram && k != 4)
        fail("cell with point summand must be a parallelogram");
}

namespace {

// -------------------------------------------------------------------------
// catalog of positioned 2-dimensional labeled Minkowski cells inside Sigma_d

struct CatalogEntry {
    Cell cell;
    std::vector<IntVec2> lower;  // vertex chain theta-min -> theta-max, below
    std::vector<IntVec2> upper;  // vertex chain theta-min -> theta-max, above
    std::vector<int> lower_edges;  // ccw edge indices along the lower chain
    std::vector<int> upper_edges;  // ccw edge indices along the upper chain
};

struct Catalog {
    std::vector<CatalogEntry> entries;
    std::map<std::vector<IntVec2>, std::vector<int>> by_lower;
    std::map<std::vector<IntVec2>, std::vector<int>> by_upper;
    size_t max_lower = 0, max_upper = 0;
};

void catalog_chains(CatalogEntry& ce) {
    const std::vector<IntVec2>& vs = ce.cell.verts;
    int k = static_cast<int>(vs.size());
    int a = 0, b = 0;
    for (int i = 1; i < k; ++i) {
        if (theta_less(vs[i], vs[a])) a = i;
        if (theta_less(vs[b], vs[i])) b = i;
    }
    // ccw from theta-min to theta-max runs along the lower boundary
    for (int i = a; i != b; i = (i + 1) % k) {
        ce.lower.push_back(vs[i]);
        ce.lower_edges.push_back(i);
    }
    ce.lower.push_back(vs[b]);
    for (int i = b; i != a; i = (i + 1) % k) ce.upper_edges.push_back(i);
    // upper chain in theta order (reverse of ccw traversal)
    std::reverse(ce.upper_edges.begin(), ce.upper_edges.end());
    ce.upper.push_back(vs[a]);
    for (int i = static_cast<int>(ce.upper_edges.size()) - 1; i >= 0; --i)
        ce.upper.push_back(vs[ce.upper_edges[i]]);
    std::reverse(ce.upper.begin() + 1, ce.upper.end());
}

// Enumerates every labeled Minkowski cell (2-dimensional, no point) with the
// given strictly convex ccw vertex list positioned inside Sigma_d, with at
// most 3 + l labels on the non-segment part.
void expand_polygon(const std::vector<IntVec2>& vs, int d, int l,
                    std::vector<Cell>& out) {
    int k = static_cast<int>(vs.size());
    Cell base;
    base.verts = vs;
    std::vector<long long> len(k);
    std::vector<IntVec2> prim(k);
    std::vector<bool> on_rim(k);
    for (int e = 0; e < k; ++e) {
        IntVec2 v = vs[(e + 1) % k] - vs[e];
        len[e] = gcd_ll(v.x, v.y);
        prim[e] = {v.x / len[e], v.y / len[e]};
        on_rim[e] = boundary_class(vs[e], vs[(e + 1) % k], d) >= 0;
    }
    // opposite parallel edge pairs
    std::vector<std::pair<int, int>> pairs;
    for (int e = 0; e < k; ++e)
        for (int f = e + 1; f < k; ++f)
            if (prim[e] == -prim[f]) pairs.push_back({e, f});
    // choose reductions r per pair + their summand partitions, then the
    // labelings of the remaining non-segment edge lengths
    std::vector<std::pair<std::vector<int>, int>> chosen;  // (parts, pair idx)
    auto emit = [&](auto&& self, size_t pi) -> void {
        if (pi == pairs.size()) {
            Cell c = base;
            std::vector<long long> rest(len);
            for (const auto& [parts, idx] : chosen) {
                auto [e, f] = pairs[idx];
                for (int p : parts) {
                    int sid = static_cast<int>(c.summands.size());
                    c.summands.push_back(prim[e] * p);
                    c.labels.push_back({e, p, sid});
                    c.labels.push_back({f, p, sid});
                    rest[e] -= p;
                    rest[f] -= p;
                }
            }
            int dim_dirs = 0;
            for (int e = 0; e < k; ++e) {
                if (rest[e] < 0) return;
                if (rest[e] == 0) continue;
                bool fresh = true;
                for (int f = 0; f < e; ++f)
                    fresh = fresh &&
                            !(rest[f] > 0 && cross(prim[e], prim[f]) == 0);
                if (fresh) ++dim_dirs;
            }
            if (dim_dirs == 1) return;  // 1-dimensional non-segment part
            if (dim_dirs == 0) {
                if (k != 4) return;
                c.kind = CellKind::Parallelogram;
                for (const CellLabel& lb : c.labels)
                    if (on_rim[lb.edge] && lb.value != 1) return;
                validate_cell(c);
                out.push_back(std::move(c));
                return;
            }
            c.kind = CellKind::Polygon;
            // labelings of the non-segment edge rests
            auto lab = [&](auto&& lself, int e, Cell cur) -> void {
                if (e == k) {
                    if (cur.ptilde_labels() > 3 + l) return;
                    validate_cell(cur);
                    out.push_back(std::move(cur));
                    return;
                }
                if (rest[e] == 0) {
                    lself(lself, e + 1, std::move(cur));
                    return;
                }
                if (on_rim[e]) {
                    Cell nxt = cur;
                    for (long long i = 0; i < rest[e]; ++i)
                        nxt.labels.push_back({e, 1, -1});
                    lself(lself, e + 1, std::move(nxt));
                    return;
                }
                for (const auto& parts : partitions(static_cast<int>(rest[e]))) {
                    Cell nxt = cur;
                    for (int p : parts) nxt.labels.push_back({e, p, -1});
                    lself(lself, e + 1, nxt);
                }
            };
            lab(lab, 0, std::move(c));
            return;
        }
        auto [e, f] = pairs[pi];
        long long rmax = std::min(len[e], len[f]);
        for (long long r = 0; r <= rmax; ++r) {
            if (r == 0) {
                self(self, pi + 1);
                continue;
            }
            for (const auto& parts : partitions(static_cast<int>(r))) {
                bool ok = true;
                if (on_rim[e] || on_rim[f])
                    for (int p : parts) ok = ok && p == 1;
                if (!ok) continue;
                chosen.push_back({parts, static_cast<int>(pi)});
                self(self, pi + 1);
                chosen.pop_back();
            }
        }
    };
    emit(emit, 0);
}

Catalog build_catalog(int d, int l) {
    std::vector<IntVec2> pts = sigma_points(d);
    int np = static_cast<int>(pts.size());
    if (np > 21)
        throw std::invalid_argument("lattice paths: degree too large");
    Catalog cat;
    for (unsigned mask = 7; mask < (1u << np); ++mask) {
        std::vector<IntVec2> sel;
        for (int i = 0; i < np; ++i)
            if (mask >> i & 1) sel.push_back(pts[i]);
        if (sel.size() < 3) continue;
        // convex hull (lex order + cross products); the subset must equal the
        // hull vertex set in strictly convex position
        std::sort(sel.begin(), sel.end());
        std::vector<IntVec2> h(2 * sel.size());
        size_t m = 0;
        for (const IntVec2& p : sel) {
            while (m >= 2 && cross(h[m - 1] - h[m - 2], p - h[m - 2]) <= 0) --m;
            h[m++] = p;
        }
        size_t lowsz = m + 1;
        for (auto it = sel.rbegin() + 1; it != sel.rend(); ++it) {
            while (m >= lowsz &&
                   cross(h[m - 1] - h[m - 2], *it - h[m - 2]) <= 0)
                --m;
            h[m++] = *it;
        }
        h.resize(m - 1);
        if (h.size() != sel.size()) continue;
        std::vector<Cell> cells;
        expand_polygon(h, d, l, cells);
        for (Cell& c : cells) {
            CatalogEntry ce;
            ce.cell = std::move(c);
            catalog_chains(ce);
            int id = static_cast<int>(cat.entries.size());
            cat.by_lower[ce.lower].push_back(id);
            cat.by_upper[ce.upper].push_back(id);
            cat.max_lower = std::max(cat.max_lower, ce.lower.size());
            cat.max_upper = std::max(cat.max_upper, ce.upper.size());
            cat.entries.push_back(std::move(ce));
        }
    }
    return cat;
}

const Catalog& catalog(int d, int l) {
    static std::map<std::pair<int, int>, Catalog> cache;
    auto key = std::make_pair(d, l);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_catalog(d, l)).first;
    return it->second;
}

// -------------------------------------------------------------------------
// path enumeration

void segment_members(const IntVec2& a, const IntVec2& b, int d, int budget,
                     bool may_point, std::vector<Cell>& out) {
    IntVec2 u = b - a;
    long long L = gcd_ll(u.x, u.y);
    IntVec2 prim{u.x / L, u.y / L};
    bool rim = boundary_class(a, b, d) >= 0;
    auto push = [&](CellKind kind, long long l0, const std::vector<int>& tp,
                    const std::vector<int>& tm, const std::vector<int>& sums) {
        Cell c;
        c.kind = kind;
        c.verts = {a, b};
        for (int side = 0; side < 2; ++side)
            for (int p : (side == 0 ? tp : tm)) c.labels.push_back({side, p, -1});
        for (int s : sums) {
            int sid = static_cast<int>(c.summands.size());
            c.summands.push_back(prim * s);
            c.labels.push_back({0, s, sid});
            c.labels.push_back({1, s, sid});
        }
        if (kind == CellKind::PointedSegment) c.point = 1;  // placeholder
        validate_cell(c);
        out.push_back(std::move(c));
        (void)l0;
    };
    // free segment: everything is a summand
    for (const auto& sums : partitions(static_cast<int>(L))) {
        bool ok = !rim || std::all_of(sums.begin(), sums.end(),
                                      [](int p) { return p == 1; });
        if (ok) push(CellKind::FreeSegment, 0, {}, {}, sums);
    }
    if (!may_point) return;
    for (long long l0 = 1; l0 <= L; ++l0) {
        for (const auto& sums : partitions(static_cast<int>(L - l0))) {
            if (rim && !std::all_of(sums.begin(), sums.end(),
                                    [](int p) { return p == 1; }))
                continue;
            for (const auto& tp : partitions(static_cast<int>(l0))) {
                if (rim && tp.size() != static_cast<size_t>(l0)) continue;
                for (const auto& tm : partitions(static_cast<int>(l0))) {
                    if (rim && tm.size() != static_cast<size_t>(l0)) continue;
                    int mark = static_cast<int>(tp.size() + tm.size()) - 2;
                    if (mark > budget) continue;
                    push(CellKind::PointedSegment, l0, tp, tm, sums);
                }
            }
        }
    }
}

}  // namespace

std::vector<LatticePath> enumerate_paths(int d, int n, int l) {
    if (d < 1 || n < 0 || l < 0 || n + l != 3 * d - 1)
        throw std::invalid_argument("enumerate_paths: need n + l == 3d - 1");
    const Catalog& cat = catalog(d, l);
    std::vector<IntVec2> pts = sigma_points(d);
    IntVec2 q{d, 0};
    std::vector<LatticePath> out;
    LatticePath cur;
    auto rec = [&](auto&& self, const IntVec2& at, int used, int marks) -> void {
        if (at == q) {
            if (used == n) out.push_back(cur);
            return;
        }
        // segment members
        for (const IntVec2& w : pts) {
            if (!theta_less(at, w)) continue;
            std::vector<Cell> ms;
            segment_members(at, w, d, l - marks, used < n, ms);
            for (Cell& m : ms) {
                if (m.kind == CellKind::PointedSegment) m.point = used + 1;
                cur.push_back(m);
                self(self, w, used + (m.point > 0 ? 1 : 0), marks + m.mark());
                cur.pop_back();
            }
        }
        // 2-dimensional pointed members
        if (used < n) {
            for (const CatalogEntry& ce : cat.entries) {
                if (ce.cell.kind != CellKind::Polygon) continue;
                if (!(ce.lower.front() == at)) continue;
                Cell m = ce.cell;
                m.point = used + 1;
                if (marks + m.mark() > l) continue;
                cur.push_back(std::move(m));
                self(self, ce.lower.back(), used + 1, marks + cur.back().mark());
                cur.pop_back();
            }
        }
    };
    rec(rec, IntVec2{0, d}, 0, 0);
    return out;
}

namespace {

// -------------------------------------------------------------------------
// completion of a path to subdivisions

struct Step {
    IntVec2 from, to;
    int cell, edge;
};

struct FillState {
    int d, l, marks;
    std::vector<Cell> cells;
    std::vector<std::array<int, 4>> glue;
    std::vector<Step> up, down;
    std::vector<Subdivision>* out;
};

bool values_match(const Cell& a, int ea, const Cell& b, int eb) {
    return a.values_on(ea) == b.values_on(eb);
}

// Steps contributed by one chain of a catalog cell instance, in theta order.
std::vector<Step> chain_steps(const CatalogEntry& ce, int cell_id, bool low) {
    const std::vector<IntVec2>& vs = low ? ce.lower : ce.upper;
    const std::vector<int>& es = low ? ce.lower_edges : ce.upper_edges;
    std::vector<Step> s;
    for (size_t i = 0; i < es.size(); ++i)
        s.push_back({vs[i], vs[i + 1], cell_id, es[i]});
    return s;
}

void fill_lower(FillState& st);

void fill_upper(FillState& st) {
    const Catalog& cat = catalog(st.d, st.l);
    int turn = -1;
    for (size_t i = 0; i + 1 < st.up.size(); ++i) {
        if (cross(st.up[i].to - st.up[i].from,
                  st.up[i + 1].to - st.up[i + 1].from) > 0) {
            turn = static_cast<int>(i);
            break;
        }
    }
    if (turn < 0) {
        for (const Step& s : st.up)
            if (boundary_class(s.from, s.to, st.d) != 2) return;
        fill_lower(st);
        return;
    }
    size_t maxrun = cat.max_lower;
    for (int a = turn; a >= 0; --a) {
        for (size_t b = turn + 1; b < st.up.size(); ++b) {
            size_t nv = b - a + 2;
            if (nv > maxrun) break;
            std::vector<IntVec2> key;
            for (size_t j = a; j <= b; ++j) key.push_back(st.up[j].from);
            key.push_back(st.up[b].to);
            auto it = cat.by_lower.find(key);
            if (it == cat.by_lower.end()) continue;
            for (int id : it->second) {
                const CatalogEntry& ce = cat.entries[id];
                if (st.marks + ce.cell.mark() > st.l) continue;
                bool ok = true;
                for (size_t j = a; j <= b && ok; ++j)
                    ok = values_match(ce.cell, ce.lower_edges[j - a],
                                      st.cells[st.up[j].cell], st.up[j].edge);
                if (!ok) continue;
                FillState nxt = st;
                int cid = static_cast<int>(nxt.cells.size());
                nxt.cells.push_back(ce.cell);
                nxt.marks += ce.cell.mark();
                for (size_t j = a; j <= b; ++j)
                    nxt.glue.push_back({cid, ce.lower_edges[j - a],
                                        st.up[j].cell, st.up[j].edge});
                std::vector<Step> rep = chain_steps(ce, cid, false);
                nxt.up.erase(nxt.up.begin() + a, nxt.up.begin() + b + 1);
                nxt.up.insert(nxt.up.begin() + a, rep.begin(), rep.end());
                fill_upper(nxt);
            }
        }
    }
}

void fill_lower(FillState& st) {
    const Catalog& cat = catalog(st.d, st.l);
    int turn = -1;
    for (size_t i = 0; i + 1 < st.down.size(); ++i) {
        if (cross(st.down[i].to - st.down[i].from,
                  st.down[i + 1].to - st.down[i + 1].from) < 0) {
            turn = static_cast<int>(i);
            break;
        }
    }
    if (turn < 0) {
        for (const Step& s : st.down) {
            int bc = boundary_class(s.from, s.to, st.d);
            if (bc != 0 && bc != 1) return;
        }
        Subdivision sub;
        sub.cells = st.cells;
        sub.glue = st.glue;
        for (const Step& s : st.up) sub.rim.push_back({s.cell, s.edge});
        for (const Step& s : st.down) sub.rim.push_back({s.cell, s.edge});
        st.out->push_back(std::move(sub));
        return;
    }
    size_t maxrun = cat.max_upper;
    for (int a = turn; a >= 0; --a) {
        for (size_t b = turn + 1; b < st.down.size(); ++b) {
            size_t nv = b - a + 2;
            if (nv > maxrun) break;
            std::vector<IntVec2> key;
            for (size_t j = a; j <= b; ++j) key.push_back(st.down[j].from);
            key.push_back(st.down[b].to);
            auto it = cat.by_upper.find(key);
            if (it == cat.by_upper.end()) continue;
            for (int id : it->second) {
                const CatalogEntry& ce = cat.entries[id];
                if (st.marks + ce.cell.mark() > st.l) continue;
                bool ok = true;
                for (size_t j = a; j <= b && ok; ++j)
                    ok = values_match(ce.cell, ce.upper_edges[j - a],
                                      st.cells[st.down[j].cell],
                                      st.down[j].edge);
                if (!ok) continue;
                FillState nxt = st;
                int cid = static_cast<int>(nxt.cells.size());
                nxt.cells.push_back(ce.cell);
                nxt.marks += ce.cell.mark();
                for (size_t j = a; j <= b; ++j)
                    nxt.glue.push_back({st.down[j].cell, st.down[j].edge, cid,
                                        ce.upper_edges[j - a]});
                std::vector<Step> rep = chain_steps(ce, cid, true);
                nxt.down.erase(nxt.down.begin() + a, nxt.down.begin() + b + 1);
                nxt.down.insert(nxt.down.begin() + a, rep.begin(), rep.end());
                fill_lower(nxt);
            }
        }
    }
}

}  // namespace

std::vector<Subdivision> complete_subdivisions(int d, const LatticePath& path,
                                               int l) {
    const Catalog& cat = catalog(d, l);
    std::vector<Subdivision> out;
    FillState st;
    st.d = d;
    st.l = l;
    st.marks = 0;
    st.out = &out;
    for (int i = 0; i < static_cast<int>(path.size()); ++i) {
        const Cell& m = path[i];
        validate_cell(m);
        st.cells.push_back(m);
        st.marks += m.mark();
        if (m.kind == CellKind::PointedSegment ||
            m.kind == CellKind::FreeSegment) {
            st.up.push_back({m.verts[0], m.verts[1], i, 0});
            st.down.push_back({m.verts[0], m.verts[1], i, 1});
        } else {
            CatalogEntry ce;
            ce.cell = m;
            catalog_chains(ce);
            for (Step s : chain_steps(ce, i, false)) st.up.push_back(s);
            for (Step s : chain_steps(ce, i, true)) st.down.push_back(s);
        }
    }
    for (size_t i = 0; i + 1 < st.up.size(); ++i)
        if (!(st.up[i].to == st.up[i + 1].from))
            throw std::invalid_argument("path members must chain in theta order");
    if (st.marks <= l) fill_upper(st);
    (void)cat;
    return out;
}

namespace {

// -------------------------------------------------------------------------
// dual curves: instances, gluings, colors, trees, multiplicities

struct Instance {
    int cell, label;  // indices into Subdivision::cells / Cell::labels
    int value;
    int rim_class = -1;  // boundary leg for rim instances
};

struct Assembler {
    int d, n;
    const Subdivision* sub;
    const std::vector<DegCrossRatio>* lams;
    Degree deg;

    std::vector<Instance> inst;
    std::vector<std::array<int, 2>> summand_bond;  // per instance
    std::vector<int> node_of_cell;  // -1 for cells without dual vertex
    int num_internal = 0;

    // per glue edge: the two instance lists, grouped by value
    struct GlueEdge {
        std::vector<int> a, b;  // instance ids, sorted by value
    };
    std::vector<GlueEdge> gedges;
    std::vector<std::vector<int>> rim_of_class;  // instance ids per leg

    std::vector<DualCurve> out;

    void build();
    void enum_glue(size_t gi, std::vector<std::array<int, 2>>& bonds);
    void with_glue(const std::vector<std::array<int, 2>>& bonds);
    void emit(const std::vector<std::array<int, 2>>& bonds,
              const std::vector<int>& end_label_of_inst, bool all_fixed,
              const std::vector<int>& chain_of_inst,
              const std::vector<std::vector<int>>& chain_insts);
};

std::vector<int> insts_on(const Assembler& as, int cell, int edge) {
    std::vector<int> r;
    for (int i = 0; i < static_cast<int>(as.inst.size()); ++i)
        if (as.inst[i].cell == cell &&
            as.sub->cells[cell].labels[as.inst[i].label].edge == edge)
            r.push_back(i);
    return r;
}

void Assembler::build() {
    const std::vector<Cell>& cells = sub->cells;
    node_of_cell.assign(cells.size(), -1);
    for (size_t c = 0; c < cells.size(); ++c)
        if (cells[c].has_dual_vertex()) node_of_cell[c] = num_internal++;
    for (size_t c = 0; c < cells.size(); ++c)
        for (size_t l = 0; l < cells[c].labels.size(); ++l)
            inst.push_back({static_cast<int>(c), static_cast<int>(l),
                            cells[c].labels[l].value});
    // summand bonds: the two instances of one summand inside one cell
    summand_bond.assign(inst.size(), {-1, -1});
    std::map<std::pair<int, int>, int> first;
    for (int i = 0; i < static_cast<int>(inst.size()); ++i) {
        const CellLabel& lb = cells[inst[i].cell].labels[inst[i].label];
        if (lb.summand < 0) continue;
        auto key = std::make_pair(inst[i].cell, lb.summand);
        auto it = first.find(key);
        if (it == first.end()) {
            first[key] = i;
        } else {
            summand_bond[i][0] = it->second;
            summand_bond[it->second][0] = i;
        }
    }
    // glue edges
    std::vector<int> glue_bond(inst.size(), -1);
    for (const auto& g : sub->glue) {
        GlueEdge ge;
        ge.a = insts_on(*this, g[0], g[1]);
        ge.b = insts_on(*this, g[2], g[3]);
        auto byval = [&](int x, int y) { return inst[x].value < inst[y].value; };
        std::sort(ge.a.begin(), ge.a.end(), byval);
        std::sort(ge.b.begin(), ge.b.end(), byval);
        std::vector<int> va, vb;
        for (int i : ge.a) va.push_back(inst[i].value);
        for (int i : ge.b) vb.push_back(inst[i].value);
        if (va != vb)
            throw std::logic_error("glued edges carry different labelings");
        gedges.push_back(std::move(ge));
    }
    // rim instances by boundary leg
    rim_of_class.assign(3, {});
    for (const auto& r : sub->rim) {
        const Cell& c = cells[r[0]];
        IntVec2 a, b;
        if (c.kind == CellKind::PointedSegment ||
            c.kind == CellKind::FreeSegment) {
            a = c.verts[0];
            b = c.verts[1];
        } else {
            a = c.verts[r[1]];
            b = c.verts[(r[1] + 1) % c.verts.size()];
        }
        int bc = boundary_class(a, b, d);
        if (bc < 0) throw std::logic_error("rim edge not on the boundary");
        for (int i : insts_on(*this, r[0], r[1])) {
            if (inst[i].value != 1)
                throw std::logic_error("boundary labels must be 1");
            inst[i].rim_class = bc;
            rim_of_class[bc].push_back(i);
        }
    }
    for (int bc = 0; bc < 3; ++bc)
        if (static_cast<int>(rim_of_class[bc].size()) != d)
            throw std::logic_error("boundary leg must carry d unit labels");
    std::vector<std::array<int, 2>> bonds;
    enum_glue(0, bonds);
}

// Enumerates the value-preserving bijections g edge by edge.
void Assembler::enum_glue(size_t gi, std::vector<std::array<int, 2>>& bonds) {
    if (gi == gedges.size()) {
        with_glue(bonds);
        return;
    }
    const GlueEdge& ge = gedges[gi];
    int k = static_cast<int>(ge.a.size());
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (int i = 0; i < k && ok; ++i)
            ok = inst[ge.a[i]].value == inst[ge.b[perm[i]]].value;
        if (!ok) continue;
        size_t base = bonds.size();
        for (int i = 0; i < k; ++i) bonds.push_back({ge.a[i], ge.b[perm[i]]});
        enum_glue(gi + 1, bonds);
        bonds.resize(base);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

void Assembler::with_glue(const std::vector<std::array<int, 2>>& bonds) {
    const std::vector<Cell>& cells = sub->cells;
    int ni = static_cast<int>(inst.size());
    // chains: connected components of the bond graph (summand + glue bonds)
    std::vector<std::vector<int>> adj(ni);
    for (int i = 0; i < ni; ++i)
        if (summand_bond[i][0] >= 0) adj[i].push_back(summand_bond[i][0]);
    for (const auto& b : bonds) {
        adj[b[0]].push_back(b[1]);
        adj[b[1]].push_back(b[0]);
    }
    std::vector<int> chain_of(ni, -1);
    std::vector<std::vector<int>> chains;
    for (int i = 0; i < ni; ++i) {
        if (chain_of[i] >= 0) continue;
        int cid = static_cast<int>(chains.size());
        chains.push_back({});
        std::vector<int> stack{i};
        chain_of[i] = cid;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            chains[cid].push_back(x);
            for (int y : adj[x])
                if (chain_of[y] < 0) {
                    chain_of[y] = cid;
                    stack.push_back(y);
                }
        }
    }
    // colors: non-segment labels of pointed cells start fixed; a dual vertex
    // with two fixed incident chains fixes all of its chains
    std::vector<char> fixed(chains.size(), 0);
    auto is_pt = [&](int i) {
        return cells[inst[i].cell].labels[inst[i].label].summand < 0;
    };
    for (int i = 0; i < ni; ++i)
        if (is_pt(i) && cells[inst[i].cell].point > 0) fixed[chain_of[i]] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t c = 0; c < cells.size(); ++c) {
            if (!cells[c].has_dual_vertex()) continue;
            std::vector<int> inc;
            for (int i = 0; i < ni; ++i)
                if (inst[i].cell == static_cast<int>(c) && is_pt(i))
                    inc.push_back(chain_of[i]);
            int nf = 0;
            for (int ch : inc) nf += fixed[ch];
            if (nf >= 2 && nf < static_cast<int>(inc.size())) {
                for (int ch : inc)
                    if (!fixed[ch]) {
                        fixed[ch] = 1;
                        changed = true;
                    }
            }
        }
    }
    bool all_fixed = std::all_of(fixed.begin(), fixed.end(),
                                 [](char f) { return f != 0; });
    // boundary end label assignments g'
    std::vector<std::vector<int>> class_labels(3);
    for (int t = 1; t <= d; ++t) class_labels[0].push_back(t);
    for (int t = d + 1; t <= 2 * d; ++t) class_labels[1].push_back(t);
    for (int t = 2 * d + 1; t <= 3 * d; ++t) class_labels[2].push_back(t);
    std::vector<int> end_label(ni, 0);
    auto assign = [&](auto&& self, int bc) -> void {
        if (bc == 3) {
            emit(bonds, end_label, all_fixed, chain_of, chains);
            return;
        }
        std::vector<int> perm(d);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            for (int i = 0; i < d; ++i)
                end_label[rim_of_class[bc][i]] = class_labels[bc][perm[i]];
            self(self, bc + 1);
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (int i : rim_of_class[bc]) end_label[i] = 0;
    };
    assign(assign, 0);
}

void Assembler::emit(const std::vector<std::array<int, 2>>& bonds,
                     const std::vector<int>& end_label, bool all_fixed,
                     const std::vector<int>& chain_of,
                     const std::vector<std::vector<int>>& chain_insts) {
    (void)bonds;
    (void)chain_of;
    const std::vector<Cell>& cells = sub->cells;
    int m = 3 * d;
    int num_nodes = n + m + num_internal;
    DualCurve dc;
    dc.all_fixed = all_fixed;
    // graph edges; remember the cell attachment of each chain edge endpoint
    struct Attach {
        int node;
        IntVec2 vec;  // weighted cell edge vector at this endpoint (outward
                      // dual direction is its -90 degree rotation)
        bool upper_side = false;  // segment side 0 (rotate +90 instead)
        bool is_seg = false;
    };
    std::vector<TreeEdge> edges;
    std::vector<std::array<Attach, 2>> att;
    auto attach_of = [&](int i, bool as_end) -> Attach {
        const Cell& c = cells[inst[i].cell];
        const CellLabel& lb = c.labels[inst[i].label];
        Attach a;
        a.vec = primitive_direction(c.edge_vec(lb.edge)).first *
                static_cast<long long>(lb.value);
        if (c.kind == CellKind::PointedSegment ||
            c.kind == CellKind::FreeSegment) {
            a.is_seg = true;
            a.upper_side = lb.edge == 0;
        }
        a.node = as_end ? n + end_label[i] - 1               // end leaf
                        : n + m + node_of_cell[inst[i].cell];  // dual vertex
        return a;
    };
    for (const auto& ch : chain_insts) {
        std::vector<Attach> ends;
        for (int i : ch) {
            const CellLabel& lb = cells[inst[i].cell].labels[inst[i].label];
            if (lb.summand < 0) ends.push_back(attach_of(i, false));
            if (inst[i].rim_class >= 0) ends.push_back(attach_of(i, true));
        }
        if (ends.size() != 2) {
            dc.is_tree = false;  // closed loop or dangling chain
            out.push_back(std::move(dc));
            return;
        }
        edges.push_back({ends[0].node, ends[1].node});
        att.push_back({ends[0], ends[1]});
    }
    size_t num_chain_edges = edges.size();
    for (size_t c = 0; c < cells.size(); ++c)
        if (cells[c].point > 0) {
            edges.push_back({cells[c].point - 1,
                             n + m + node_of_cell[c]});
            att.push_back({});
        }
    // tree check: right edge count + connected
    if (static_cast<int>(edges.size()) != num_nodes - 1) {
        dc.is_tree = false;
        out.push_back(std::move(dc));
        return;
    }
    std::vector<int> par(num_nodes);
    std::iota(par.begin(), par.end(), 0);
    auto find = [&](int x) {
        while (par[x] != x) x = par[x] = par[par[x]];
        return x;
    };
    int comps = num_nodes;
    for (const TreeEdge& e : edges) {
        int a = find(e.u), b = find(e.v);
        if (a == b) {
            dc.is_tree = false;
            out.push_back(std::move(dc));
            return;
        }
        par[a] = b;
        --comps;
    }
    if (comps != 1) {
        dc.is_tree = false;
        out.push_back(std::move(dc));
        return;
    }
    dc.is_tree = true;
    dc.tree = MarkedTree(n, m, num_nodes, edges);
    dc.cell_of_node.assign(num_internal, -1);
    for (size_t c = 0; c < cells.size(); ++c)
        if (node_of_cell[c] >= 0) dc.cell_of_node[node_of_cell[c]] = static_cast<int>(c);
    StableMap curve(dc.tree, deg);
    // direction consistency: the chain direction computed from the degree must
    // match the rotated cell edge at each internal attachment
    for (size_t e = 0; e < num_chain_edges; ++e) {
        for (int side = 0; side < 2; ++side) {
            const Attach& a = att[e][side];
            if (a.node < n + m) continue;  // ends are checked by construction
            IntVec2 expect = a.is_seg && a.upper_side ? rot_plus90(a.vec)
                                                      : rot_minus90(a.vec);
            if (!(curve.edge_dir(static_cast<int>(e), a.node) == expect))
                throw std::logic_error("dual curve direction mismatch");
        }
    }
    dc.canonical = curve.canonical_string();
    dc.fits = validate_constrained_type(dc.tree, *lams);
    if (dc.fits) {
        dc.lambda_at.assign(num_internal, {});
        for (int v = 0; v < num_internal; ++v)
            dc.lambda_at[v] = lambda_v(dc.tree, n + m + v, *lams);
    }
    // multiplicity: per-cell fixed-direction determinants times the
    // resolution weight, cross-checked against the curve total
    dc.mult_ev = 1;
    std::vector<CrossRatio> pairings;
    for (const DegCrossRatio& lam : *lams)
        pairings.push_back(lam.with_default_pairing());
    for (int v = 0; v < num_internal && dc.mult_ev != 0; ++v) {
        int node = n + m + v;
        const Cell& c = cells[dc.cell_of_node[v]];
        if (c.point > 0) continue;  // members weigh 1
        if (c.kind == CellKind::Parallelogram) continue;
        std::vector<IntVec2> fixed_vecs;
        for (const BranchInfo& br : classify_components(curve, *lams, node)) {
            if (br.cls != BranchClass::Fixed) continue;
            if (br.edge >= static_cast<int>(num_chain_edges)) {
                fixed_vecs.clear();
                break;
            }
            const auto& pr = att[br.edge];
            const Attach& a = pr[0].node == node ? pr[0] : pr[1];
            fixed_vecs.push_back(a.vec);
        }
        if (fixed_vecs.size() != 2) {
            dc.mult_ev = 0;
            break;
        }
        Int det = Int(cross(fixed_vecs[0], fixed_vecs[1]));
        dc.mult_ev *= det < 0 ? -det : det;
    }
    dc.omega = 1;
    if (dc.fits && dc.mult_ev != 0)
        for (int v = 0; v < num_internal; ++v)
            dc.omega *= resolution_weight_at_vertex(curve, pairings, n + m + v);
    dc.mult = dc.fits ? total_multiplicity(curve, pairings) : Int(0);
    if (dc.fits && dc.mult != dc.mult_ev * dc.omega)
        throw std::logic_error("multiplicity cross-check failed");
    out.push_back(std::move(dc));
}

}  // namespace

std::vector<DualCurve> dual_curves(int d, const Subdivision& s,
                                   const std::vector<DegCrossRatio>& lams) {
    Assembler as;
    as.d = d;
    as.sub = &s;
    as.lams = &lams;
    as.deg = delta_d(d);
    int npts = 0;
    for (const Cell& c : s.cells) npts = std::max(npts, c.point);
    as.n = npts;
    as.build();
    return as.out;
}

LpaCount lpa_count(int d, int n, const std::vector<DegCrossRatio>& lams,
                   bool keep_details) {
    int l = static_cast<int>(lams.size());
    if (n + l != 3 * d - 1)
        throw std::invalid_argument("lpa_count: need n + #lams == 3d - 1");
    for (const DegCrossRatio& lam : lams)
        for (const EndRef& r : lam.refs) {
            if (r.is_point && (r.idx < 1 || r.idx > n))
                throw std::invalid_argument("lpa_count: point ref out of range");
            if (!r.is_point && (r.idx < 1 || r.idx > 3 * d))
                throw std::invalid_argument("lpa_count: end ref out of range");
        }
    LpaCount res;
    std::map<std::string, Int> counted;
    for (const LatticePath& path : enumerate_paths(d, n, l)) {
        ++res.paths;
        for (const Subdivision& sub : complete_subdivisions(d, path, l)) {
            ++res.subdivisions;
            for (DualCurve& dc : dual_curves(d, sub, lams)) {
                if (!dc.all_fixed || !dc.is_tree || !dc.fits || dc.mult == 0)
                    continue;
                auto it = counted.find(dc.canonical);
                if (it != counted.end()) {
                    if (it->second != dc.mult)
                        throw std::logic_error("duplicate curve, new weight");
                    ++res.collisions;
                    continue;
                }
                counted[dc.canonical] = dc.mult;
                res.labeled += dc.mult;
                ++res.curves;
                if (keep_details) res.details.push_back(std::move(dc));
            }
        }
    }
    // unlabeled normalization: degree labels of one boundary direction that no
    // cross-ratio references are interchangeable
    Int div = 1;
    for (int bc = 0; bc < 3; ++bc) {
        Int free_cnt = 0;
        for (int t = bc * d + 1; t <= (bc + 1) * d; ++t) {
            bool pinned = false;
            for (const DegCrossRatio& lam : lams)
                for (const EndRef& r : lam.refs)
                    pinned = pinned || (!r.is_point && r.idx == t);
            if (!pinned) ++free_cnt;
        }
        for (Int i = 2; i <= free_cnt; ++i) div *= i;
    }
    if (res.labeled % div != 0)
        throw std::logic_error("labeled count not divisible by relabelings");
    res.unlabeled = res.labeled / div;
    return res;
}

std::vector<RatVec2> stretched_config(int n) {
    std::vector<RatVec2> pts;
    Int x = 1;
    const Int M = 64, K = 1 << 20;
    for (int j = 0; j < n; ++j) {
        x *= M;
        pts.push_back({Rat(x), -Rat(x) / K});
    }
    return pts;
}

StableMap positioned_dual(const MarkedTree& tree, const Degree& deg,
                          const std::vector<RatVec2>& points) {
    if (static_cast<int>(points.size()) != tree.n())
        throw std::invalid_argument("positioned_dual: one point per x_j");
    StableMap c(tree, deg);
    EvFtMatrix A = ev_ft_matrix(c, {}, {});
    if (A.mat.rows() != A.mat.cols())
        throw std::invalid_argument("positioned_dual: type is not rigid");
    std::vector<Rat> rhs;
    for (const RatVec2& p : points) {
        rhs.push_back(p.x);
        rhs.push_back(p.y);
    }
    auto sol = A.mat.solve(rhs);
    if (!sol) throw std::runtime_error("positioned_dual: singular type");
    c.anchor = RatVec2{(*sol)[0], (*sol)[1]};
    c.edge_length.assign(tree.edges().size(), Rat(0));
    for (size_t j = 0; j < A.bounded.size(); ++j) {
        Rat len = (*sol)[2 + j];
        if (len <= 0)
            throw std::runtime_error("positioned_dual: nonpositive length");
        c.edge_length[A.bounded[j]] = len;
    }
    return c;
}

}  // namespace tropcr
