#include "tropcr/floor_diagrams.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tropcr {

namespace {

Int factorial(int k) {
    Int r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

std::vector<std::vector<int>> adjacency(
    int n, const std::vector<std::array<int, 2>>& edges) {
    std::vector<std::vector<int>> adj(n);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        adj[edges[e][0]].push_back(e);
        adj[edges[e][1]].push_back(e);
    }
    return adj;
}

// vertices of the path between a and b (inclusive)
std::vector<int> tree_path(int n, const std::vector<std::array<int, 2>>& edges,
                           const std::vector<std::vector<int>>& adj, int a,
                           int b) {
    std::vector<int> par(n, -2);
    std::vector<int> stack{a};
    par[a] = -1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (u == b) break;
        for (int e : adj[u]) {
            int w = edges[e][0] == u ? edges[e][1] : edges[e][0];
            if (par[w] == -2) {
                par[w] = u;
                stack.push_back(w);
            }
        }
    }
    std::vector<int> path;
    for (int u = b; u != -1; u = par[u]) path.push_back(u);
    return path;
}

bool tree_connected(int n, const std::vector<std::array<int, 2>>& edges) {
    if (static_cast<int>(edges.size()) != n - 1) return false;
    auto adj = adjacency(n, edges);
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int cnt = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int e : adj[u]) {
            int w = edges[e][0] == u ? edges[e][1] : edges[e][0];
            if (!seen[w]) {
                seen[w] = 1;
                ++cnt;
                stack.push_back(w);
            }
        }
    }
    return cnt == n;
}

std::string problem_key(const OracleProblem& p) {
    std::ostringstream os;
    for (const auto& en : p.degree.entries())
        os << en.dir.x << ',' << en.dir.y << ';';
    os << "|dev:";
    for (int t : p.dev) os << t << ',';
    os << "|cr:";
    for (const auto& lam : p.deg_cross) {
        for (const auto& r : lam.refs) os << r.str() << ',';
        os << ';';
    }
    return os.str();
}

}  // namespace

int FloorDiagram::thick_count(int v) const {
    return 2 - 2 * size_v[v] + lambda_count(v) - ends_v[v];
}

int FloorDiagram::lambda_count(int v) const {
    return static_cast<int>(
        std::count(lambda_vertex.begin(), lambda_vertex.end(), v));
}

std::string FloorDiagram::str() const {
    std::ostringstream os;
    os << "d=" << d << " n=" << n;
    for (int v = 0; v < n; ++v)
        os << " v" << v + 1 << "(s=" << size_v[v] << ",a=" << ends_v[v] << ")";
    for (size_t e = 0; e < edges.size(); ++e)
        os << " " << edges[e][0] + 1 << (thick_at_min[e] ? "=" : "-") << "w"
           << weight[e] << (thick_at_min[e] ? "-" : "=") << edges[e][1] + 1;
    for (size_t j = 0; j < lambda_vertex.size(); ++j)
        os << " L" << j + 1 << "@v" << lambda_vertex[j] + 1;
    return os.str();
}

std::optional<std::vector<int>> lambda_vertices(
    int n, const std::vector<std::array<int, 2>>& edges,
    const std::vector<DegCrossRatio>& lams) {
    auto adj = adjacency(n, edges);
    std::vector<int> out;
    for (const auto& lam : lams) {
        std::array<int, 4> w{};
        for (int i = 0; i < 4; ++i) {
            if (!lam.refs[i].is_point || lam.refs[i].idx > n) return std::nullopt;
            w[i] = lam.refs[i].idx - 1;
        }
        auto p1 = tree_path(n, edges, adj, w[0], w[1]);
        auto p2 = tree_path(n, edges, adj, w[2], w[3]);
        std::sort(p1.begin(), p1.end());
        std::sort(p2.begin(), p2.end());
        std::vector<int> common;
        std::set_intersection(p1.begin(), p1.end(), p2.begin(), p2.end(),
                              std::back_inserter(common));
        if (common.size() != 1) return std::nullopt;
        out.push_back(common[0]);
    }
    return out;
}

void validate_diagram(const FloorDiagram& f,
                      const std::vector<DegCrossRatio>& lams) {
    if (f.n < 1 || f.d < 1) throw std::invalid_argument("floor diagram: empty");
    if (!tree_connected(f.n, f.edges))
        throw std::invalid_argument("floor diagram: not a tree");
    for (const auto& e : f.edges)
        if (e[0] >= e[1])
            throw std::invalid_argument("floor diagram: edges must go left to right");
    if (static_cast<int>(f.size_v.size()) != f.n ||
        static_cast<int>(f.ends_v.size()) != f.n ||
        f.weight.size() != f.edges.size() ||
        f.thick_at_min.size() != f.edges.size() ||
        f.lambda_vertex.size() != lams.size())
        throw std::invalid_argument("floor diagram: inconsistent data sizes");
    if (std::accumulate(f.size_v.begin(), f.size_v.end(), 0) != f.d)
        throw std::invalid_argument("floor diagram: sizes must sum to d");
    if (std::accumulate(f.ends_v.begin(), f.ends_v.end(), 0) != f.d)
        throw std::invalid_argument("floor diagram: horizontal ends must sum to d");
    for (int v = 0; v < f.n; ++v)
        if (f.size_v[v] < 0 || f.ends_v[v] < 0)
            throw std::invalid_argument("floor diagram: negative vertex data");
    // flow balance: outgoing minus incoming weight = a_v - s_v
    std::vector<long long> net(f.n, 0);
    std::vector<int> thick(f.n, 0), deg(f.n, 0);
    for (size_t e = 0; e < f.edges.size(); ++e) {
        if (f.weight[e] < 1)
            throw std::invalid_argument("floor diagram: weights must be positive");
        net[f.edges[e][0]] += f.weight[e];
        net[f.edges[e][1]] -= f.weight[e];
        ++thick[f.edges[e][f.thick_at_min[e] ? 0 : 1]];
        ++deg[f.edges[e][0]];
        ++deg[f.edges[e][1]];
    }
    for (int v = 0; v < f.n; ++v) {
        if (net[v] != f.ends_v[v] - f.size_v[v])
            throw std::invalid_argument("floor diagram: weights are not balanced");
        if (thick[v] != f.thick_count(v))
            throw std::invalid_argument(
                "floor diagram: thick half-edge count mismatch at vertex " +
                std::to_string(v + 1));
    }
    auto lv = lambda_vertices(f.n, f.edges, lams);
    if (!lv)
        throw std::invalid_argument("floor diagram: a cross-ratio is not satisfied");
    if (*lv != f.lambda_vertex)
        throw std::invalid_argument("floor diagram: cross-ratio vertices mismatch");
}

FloorPieces diagram_pieces(const FloorDiagram& f,
                           const std::vector<DegCrossRatio>& lams) {
    FloorPieces out;
    auto adj = adjacency(f.n, f.edges);
    for (int v = 0; v < f.n; ++v) {
        std::vector<DegreeEntry> entries;
        std::map<int, int> elab;
        int label = 1;
        // alpha block: incoming elevators, then the original horizontal ends
        for (int e : adj[v])
            if (f.edges[e][1] == v) {
                entries.push_back({IntVec2{-1, 0} * f.weight[e], label});
                elab[e] = label++;
            }
        for (int k = 0; k < f.ends_v[v]; ++k)
            entries.push_back({IntVec2{-1, 0}, label++});
        // beta block: outgoing elevators
        for (int e : adj[v])
            if (f.edges[e][0] == v) {
                entries.push_back({IntVec2{1, 0} * f.weight[e], label});
                elab[e] = label++;
            }
        for (int k = 0; k < f.size_v[v]; ++k)
            entries.push_back({IntVec2{0, -1}, label++});
        for (int k = 0; k < f.size_v[v]; ++k)
            entries.push_back({IntVec2{1, 1}, label++});

        OracleProblem p;
        p.degree = Degree(entries, /*allow_nonspanning=*/true);
        p.n = 1;
        for (int e : adj[v]) {
            bool thin_here = f.thick_at_min[e] ? (f.edges[e][1] == v)
                                               : (f.edges[e][0] == v);
            if (thin_here) p.dev.push_back(elab[e]);
        }
        for (size_t j = 0; j < lams.size(); ++j) {
            if (f.lambda_vertex[j] != v) continue;
            std::array<EndRef, 4> refs;
            for (int i = 0; i < 4; ++i) {
                int w = lams[j].refs[i].idx - 1;
                if (w == v) {
                    refs[i] = EndRef::point(1);
                } else {
                    // first edge of the path from v towards w
                    auto path = tree_path(f.n, f.edges, adj, v, w);
                    // path is listed from w back to v; the vertex after v
                    int next = path[path.size() - 2];
                    int ve = -1;
                    for (int e : adj[v]) {
                        int o = f.edges[e][0] == v ? f.edges[e][1] : f.edges[e][0];
                        if (o == next) { ve = e; break; }
                    }
                    refs[i] = EndRef::end(elab.at(ve));
                }
            }
            p.deg_cross.push_back(DegCrossRatio(refs));
        }
        out.probs.push_back(std::move(p));
        out.end_of_edge.push_back(std::move(elab));
    }
    return out;
}

Int diagram_multiplicity(const FloorDiagram& f,
                         const std::vector<DegCrossRatio>& lams, unsigned seed,
                         PieceMemo* memo) {
    PieceMemo local;
    if (!memo) memo = &local;
    auto pieces = diagram_pieces(f, lams);
    Int mult = 1;
    for (const auto& p : pieces.probs) {
        std::string key = problem_key(p);
        auto it = memo->find(key);
        Int piece;
        if (it != memo->end()) {
            piece = it->second;
        } else {
            piece = oracle_count(p, seed);
            if (oracle_count(p, seed + 1) != piece)
                throw std::logic_error(
                    "floor diagram: piece count depends on the configuration");
            (*memo)[key] = piece;
        }
        if (piece == 0) return 0;
        mult *= piece;
    }
    return mult;
}

Int label_distribution_factor(const FloorDiagram& f) {
    Int dfac = factorial(f.d);
    Int ends = dfac, sizes = dfac;
    for (int v = 0; v < f.n; ++v) {
        ends /= factorial(f.ends_v[v]);
        sizes /= factorial(f.size_v[v]);
    }
    return ends * sizes * sizes;
}

namespace {

// enumeration state shared across the recursion over trees and vertex data
struct FloorEnum {
    int d, n;
    const std::vector<DegCrossRatio>& lams;
    unsigned seed;
    bool keep;
    FloorCount result;
    PieceMemo memo;

    std::vector<std::array<int, 2>> edges;
    std::vector<std::vector<int>> adj;
    std::vector<int> lam_at;      // vertex per cross-ratio
    std::vector<int> nlam, deg;   // per vertex
    std::vector<int> s, a;

    FloorEnum(int d_, int n_, const std::vector<DegCrossRatio>& l, unsigned sd,
              bool k)
        : d(d_), n(n_), lams(l), seed(sd), keep(k) {}

    void per_tree() {
        auto lv = lambda_vertices(n, edges, lams);
        if (!lv) return;
        lam_at = *lv;
        adj = adjacency(n, edges);
        nlam.assign(n, 0);
        deg.assign(n, 0);
        for (int v : lam_at) ++nlam[v];
        for (const auto& e : edges) {
            ++deg[e[0]];
            ++deg[e[1]];
        }
        s.assign(n, 0);
        a.assign(n, 0);
        choose_sizes(0, d);
    }

    void choose_sizes(int v, int rem) {
        if (v == n) {
            if (rem == 0) choose_ends(0, d);
            return;
        }
        int cap = std::min(rem, (2 + nlam[v]) / 2);  // thick count >= 0 with a=0
        for (int sv = 0; sv <= cap; ++sv) {
            s[v] = sv;
            choose_sizes(v + 1, rem - sv);
        }
        s[v] = 0;
    }

    void choose_ends(int v, int rem) {
        if (v == n) {
            if (rem == 0) with_vertex_data();
            return;
        }
        int hi = std::min(rem, 2 - 2 * s[v] + nlam[v]);          // thick >= 0
        int lo = std::max(0, 2 - 2 * s[v] + nlam[v] - deg[v]);   // thick <= deg
        for (int av = lo; av <= hi; ++av) {
            a[v] = av;
            choose_ends(v + 1, rem - av);
        }
        a[v] = 0;
    }

    void with_vertex_data() {
        // edge weights: cutting an edge, the weight equals the net excess
        // a-s of the component behind its smaller endpoint
        std::vector<long long> w(edges.size());
        for (size_t e = 0; e < edges.size(); ++e) {
            long long sum = 0;
            // collect the component of edges[e][0] with edge e removed
            std::vector<char> seen(n, 0);
            std::vector<int> stack{edges[e][0]};
            seen[edges[e][0]] = 1;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                sum += a[u] - s[u];
                for (int e2 : adj[u]) {
                    if (e2 == static_cast<int>(e)) continue;
                    int o = edges[e2][0] == u ? edges[e2][1] : edges[e2][0];
                    if (!seen[o]) {
                        seen[o] = 1;
                        stack.push_back(o);
                    }
                }
            }
            if (sum < 1) return;
            w[e] = sum;
        }
        // thick/thin assignment: edge e thick at exactly one endpoint,
        // vertex v carries thick_count(v) thick tree half-edges
        std::vector<int> need(n);
        for (int v = 0; v < n; ++v) {
            need[v] = 2 - 2 * s[v] + nlam[v] - a[v];
            if (need[v] < 0 || need[v] > deg[v]) return;
        }
        std::vector<bool> thick_min(edges.size());
        FloorDiagram f;
        f.d = d;
        f.n = n;
        f.edges = edges;
        f.weight = w;
        f.size_v = s;
        f.ends_v = a;
        f.lambda_vertex = lam_at;
        assign_thick(0, need, thick_min, f);
    }

    void assign_thick(size_t e, std::vector<int>& need,
                      std::vector<bool>& thick_min, FloorDiagram& f) {
        if (e == edges.size()) {
            for (int v = 0; v < n; ++v)
                if (need[v] != 0) return;
            f.thick_at_min = thick_min;
            Int mult = diagram_multiplicity(f, lams, seed, &memo);
            if (mult == 0) return;
            Int contrib = mult * label_distribution_factor(f);
            result.total += contrib;
            ++result.diagrams;
            if (keep) result.contributions.emplace_back(f, contrib);
            return;
        }
        for (int side = 0; side < 2; ++side) {
            int v = edges[e][side];
            if (need[v] == 0) continue;
            --need[v];
            thick_min[e] = (side == 0);
            assign_thick(e + 1, need, thick_min, f);
            ++need[v];
        }
    }
};

void prufer_trees(int n, const std::function<void(
                             const std::vector<std::array<int, 2>>&)>& fn) {
    if (n == 1) {
        fn({});
        return;
    }
    std::vector<int> seq(n - 2, 0);
    while (true) {
        // decode the sequence into a labeled tree
        std::vector<std::array<int, 2>> edges;
        std::vector<char> used(n, 0);
        std::vector<int> degree(n, 1);
        for (int x : seq) ++degree[x];
        std::set<int> leaves;
        for (int v = 0; v < n; ++v)
            if (degree[v] == 1) leaves.insert(v);
        std::vector<int> work = seq;
        for (int x : work) {
            int leaf = *leaves.begin();
            leaves.erase(leaves.begin());
            edges.push_back({std::min(leaf, x), std::max(leaf, x)});
            if (--degree[x] == 1) leaves.insert(x);
        }
        int u = *leaves.begin(), v = *std::next(leaves.begin());
        edges.push_back({std::min(u, v), std::max(u, v)});
        fn(edges);
        // next sequence
        int i = n - 3;
        while (i >= 0 && seq[i] == n - 1) seq[i--] = 0;
        if (i < 0) break;
        ++seq[i];
    }
}

}  // namespace

FloorCount floor_count(int d, int n, const std::vector<DegCrossRatio>& lams,
                       unsigned seed, bool keep_diagrams) {
    if (d < 1 || n < 1) throw std::invalid_argument("floor count: bad degree");
    if (n + static_cast<int>(lams.size()) != 3 * d - 1)
        throw std::invalid_argument(
            "floor count: need n + #cross-ratios == 3d - 1");
    for (const auto& lam : lams)
        for (const auto& r : lam.refs)
            if (!r.is_point || r.idx < 1 || r.idx > n)
                throw std::invalid_argument(
                    "floor count: cross-ratio entries must be marked points");
    FloorEnum en(d, n, lams, seed, keep_diagrams);
    prufer_trees(n, [&](const std::vector<std::array<int, 2>>& edges) {
        en.edges = edges;
        en.per_tree();
    });
    return std::move(en.result);
}

}  // namespace tropcr
