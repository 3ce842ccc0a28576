#include "tropcr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace tropcr {

namespace {

constexpr unsigned long long P = (1ull << 61) - 1;

unsigned long long mulmod(unsigned long long a, unsigned long long b) {
    return static_cast<unsigned long long>(
        static_cast<unsigned __int128>(a) * b % P);
}

unsigned long long powmod(unsigned long long a, unsigned long long e) {
    unsigned long long r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a);
        a = mulmod(a, a);
        e >>= 1;
    }
    return r;
}

unsigned long long to_mod(long long v) {
    long long m = v % static_cast<long long>(P);
    if (m < 0) m += static_cast<long long>(P);
    return static_cast<unsigned long long>(m);
}

// Determinant mod P by Gaussian elimination; n <= 32.
unsigned long long detmod(unsigned long long* a, int n) {
    unsigned long long det = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[r * n + col] != 0) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != col) {
            for (int j = col; j < n; ++j)
                std::swap(a[piv * n + j], a[col * n + j]);
            det = P - det;
        }
        unsigned long long inv = powmod(a[col * n + col], P - 2);
        det = mulmod(det, a[col * n + col]);
        for (int r = col + 1; r < n; ++r) {
            unsigned long long f = a[r * n + col];
            if (!f) continue;
            f = mulmod(f, inv);
            for (int j = col; j < n; ++j) {
                unsigned long long sub = mulmod(f, a[col * n + j]);
                unsigned long long& cell = a[r * n + j];
                cell = (cell >= sub) ? cell - sub : cell + P - sub;
            }
        }
    }
    return det;
}

constexpr int MAX_LEAVES = 20;
constexpr int MAX_NODES = 2 * MAX_LEAVES - 2;
constexpr int MAX_EDGES = 2 * MAX_LEAVES - 3;

struct RowSpec {
    enum Kind { PointX, PointY, DevY, Cross } kind;
    int leaf_node = -1;          // far leaf node for Point*/DevY rows
    std::array<int, 4> cr_leaf{};  // leaf node of each cross-ratio ref
};

// Shared state of one enumeration run.
struct Enumerator {
    const OracleProblem& prob;
    const OracleConfig& cfg;
    const std::vector<CrossRatio> crs;  // realized cross-ratio conditions

    int N;        // number of leaves
    int dim;      // matrix dimension = N - 3 (bounded edges of a trivalent type)
    std::vector<IntVec2> leafvec;       // end direction per leaf node
    std::vector<RowSpec> rowspecs;

    std::vector<std::array<int, 2>> edges;
    int next_internal;

    // scratch buffers reused across trees
    int adj_edges[MAX_NODES][3];
    int adj_deg[MAX_NODES];
    int dfs_order[MAX_NODES];
    int parent_edge[MAX_NODES];
    std::uint64_t sub_mask[MAX_EDGES];
    long long sub_x[MAX_EDGES], sub_y[MAX_EDGES];
    int bounded[MAX_EDGES];
    unsigned long long mat[32 * 32];

    OracleResult* out = nullptr;
    bool degenerate_hit = false;

    Enumerator(const OracleProblem& p, const OracleConfig& c)
        : prob(p), cfg(c), crs(p.realized_cross()) {
        N = p.n + static_cast<int>(p.degree.size());
        if (N < 3) throw std::invalid_argument("oracle: fewer than 3 ends");
        if (N > MAX_LEAVES)
            throw std::invalid_argument("oracle: too many ends to enumerate");
        dim = N - 3;
        leafvec.assign(N, IntVec2{0, 0});
        for (const auto& en : p.degree.entries())
            leafvec[p.n + en.label - 1] = en.dir;
        for (int j = 2; j <= p.n; ++j) {
            rowspecs.push_back({RowSpec::PointX, j - 1, {}});
            rowspecs.push_back({RowSpec::PointY, j - 1, {}});
        }
        for (int t : p.dev)
            rowspecs.push_back({RowSpec::DevY, p.n + t - 1, {}});
        for (const auto& cr : crs) {
            RowSpec rs{RowSpec::Cross, -1, {}};
            for (int i = 0; i < 4; ++i) {
                const EndRef& r = cr.refs[i];
                rs.cr_leaf[i] = r.is_point ? r.idx - 1 : p.n + r.idx - 1;
            }
            rowspecs.push_back(rs);
        }
        // trivalent types have N-3 bounded edges; validate() guarantees the
        // full matrix is square, so the reduced one is square too
        edges.reserve(MAX_EDGES);
    }

    void run(OracleResult* res) {
        out = res;
        degenerate_hit = false;
        edges.clear();
        next_internal = N;
        if (N == 3) {
            edges.push_back({0, N});
            edges.push_back({1, N});
            edges.push_back({2, N});
            ++next_internal;
            evaluate();
            return;
        }
        edges.push_back({0, N});
        edges.push_back({1, N});
        edges.push_back({2, N});
        ++next_internal;
        insert_leaf(3);
    }

    void insert_leaf(int leaf) {
        int ecount = static_cast<int>(edges.size());
        int w = next_internal++;
        for (int e = 0; e < ecount; ++e) {
            auto [u, v] = edges[e];
            edges[e] = {u, w};
            edges.push_back({w, v});
            edges.push_back({leaf, w});
            if (leaf + 1 == N)
                evaluate();
            else
                insert_leaf(leaf + 1);
            if (degenerate_hit) return;
            edges.pop_back();
            edges.pop_back();
            edges[e] = {u, v};
        }
        --next_internal;
    }

    void evaluate() {
        ++out->trees_enumerated;
        int num_nodes = next_internal;
        int ne = static_cast<int>(edges.size());
        for (int u = 0; u < num_nodes; ++u) adj_deg[u] = 0;
        for (int e = 0; e < ne; ++e) {
            adj_edges[edges[e][0]][adj_deg[edges[e][0]]++] = e;
            adj_edges[edges[e][1]][adj_deg[edges[e][1]]++] = e;
        }
        // iterative DFS from leaf 0 (= x1); record preorder + parent edges
        int sp = 0;
        dfs_order[sp++] = 0;
        parent_edge[0] = -1;
        int seen = 1;
        // simple stack walk: dfs_order doubles as the stack prefix
        for (int qi = 0; qi < seen; ++qi) {
            int u = dfs_order[qi];
            for (int k = 0; k < adj_deg[u]; ++k) {
                int e = adj_edges[u][k];
                if (e == parent_edge[u]) continue;
                int v = edges[e][0] == u ? edges[e][1] : edges[e][0];
                parent_edge[v] = e;
                dfs_order[seen++] = v;
            }
        }
        // bottom-up subtree masks and direction sums (subtree = side away
        // from the root leaf x1)
        for (int e = 0; e < ne; ++e) {
            sub_mask[e] = 0;
            sub_x[e] = sub_y[e] = 0;
        }
        for (int qi = seen - 1; qi >= 1; --qi) {
            int u = dfs_order[qi];
            int pe = parent_edge[u];
            if (u < N) {
                sub_mask[pe] |= 1ull << u;
                sub_x[pe] += leafvec[u].x;
                sub_y[pe] += leafvec[u].y;
            }
            for (int k = 0; k < adj_deg[u]; ++k) {
                int e = adj_edges[u][k];
                if (e == pe) continue;
                sub_mask[pe] |= sub_mask[e];
                sub_x[pe] += sub_x[e];
                sub_y[pe] += sub_y[e];
            }
        }
        // bounded edges. An edge with zero direction is contracted by the map;
        // its length influences nothing but cross-ratio values, so the type
        // is singular (drop it) unless some cross-ratio row sees the edge.
        int nb = 0;
        for (int e = 0; e < ne; ++e) {
            if (edges[e][0] < N || edges[e][1] < N) continue;
            if (sub_x[e] == 0 && sub_y[e] == 0) {
                bool seen_by_cross = false;
                for (const RowSpec& rs : rowspecs) {
                    if (rs.kind != RowSpec::Cross) continue;
                    int b0 = sub_mask[e] >> rs.cr_leaf[0] & 1;
                    int b1 = sub_mask[e] >> rs.cr_leaf[1] & 1;
                    int b2 = sub_mask[e] >> rs.cr_leaf[2] & 1;
                    int b3 = sub_mask[e] >> rs.cr_leaf[3] & 1;
                    if (b0 == b1 && b2 == b3 && b0 != b2) seen_by_cross = true;
                    if (b0 == b3 && b1 == b2 && b0 != b1) seen_by_cross = true;
                    if (seen_by_cross) break;
                }
                if (!seen_by_cross) return;
            }
            bounded[nb++] = e;
        }
        if (nb != dim) throw std::logic_error("oracle: bounded edge count");
        if (dim > 0) {
            long double hada = 1.0L;
            int r = 0;
            for (const RowSpec& rs : rowspecs) {
                long double norm2 = 0.0L;
                for (int j = 0; j < dim; ++j) {
                    int e = bounded[j];
                    long long entry = 0;
                    switch (rs.kind) {
                        case RowSpec::PointX:
                            if (sub_mask[e] >> rs.leaf_node & 1) entry = sub_x[e];
                            break;
                        case RowSpec::PointY:
                        case RowSpec::DevY:
                            if (sub_mask[e] >> rs.leaf_node & 1) entry = sub_y[e];
                            break;
                        case RowSpec::Cross: {
                            int b0 = sub_mask[e] >> rs.cr_leaf[0] & 1;
                            int b1 = sub_mask[e] >> rs.cr_leaf[1] & 1;
                            int b2 = sub_mask[e] >> rs.cr_leaf[2] & 1;
                            int b3 = sub_mask[e] >> rs.cr_leaf[3] & 1;
                            if (b0 == b1 && b2 == b3 && b0 != b2)
                                entry = 1;
                            else if (b0 == b3 && b1 == b2 && b0 != b1)
                                entry = -1;
                            break;
                        }
                    }
                    mat[r * dim + j] = to_mod(entry);
                    norm2 += static_cast<long double>(entry) *
                             static_cast<long double>(entry);
                }
                hada *= norm2;
                ++r;
            }
            // |det|^2 <= hada; when hada < P^2 a zero residue certifies an
            // exactly singular matrix
            bool certified =
                hada < static_cast<long double>(P) * static_cast<long double>(P);
            if (detmod(mat, dim) == 0 && certified) return;
        }
        solve_exact();
    }

    void solve_exact() {
        std::vector<TreeEdge> tes(edges.size());
        for (size_t e = 0; e < edges.size(); ++e)
            tes[e] = TreeEdge{edges[e][0], edges[e][1]};
        MarkedTree t(prob.n, static_cast<int>(prob.degree.size()),
                     next_internal, tes);
        StableMap c(t, prob.degree);
        EvFtMatrix A = ev_ft_matrix(c, prob.dev, crs);
        std::vector<Rat> b;
        for (int j = 1; j <= prob.n; ++j) {
            b.push_back(cfg.points[j - 1].x);
            b.push_back(cfg.points[j - 1].y);
        }
        for (size_t i = 0; i < prob.dev.size(); ++i) b.push_back(cfg.heights[i]);
        for (const auto& cr : crs) b.push_back(*cr.length);
        auto sol = A.mat.solve(b);
        if (!sol) return;  // singular: only without Hadamard certification
        for (size_t j = 0; j < A.bounded.size(); ++j) {
            const Rat& len = (*sol)[2 + j];
            if (len < 0) return;
            if (len == 0) {  // non-generic configuration: resample
                degenerate_hit = true;
                return;
            }
            c.edge_length[A.bounded[j]] = len;
        }
        c.anchor = RatVec2{(*sol)[0], (*sol)[1]};
        Int mult = abs(numerator(A.mat.det()));
        if (denominator(A.mat.det()) != 1)
            throw std::logic_error("oracle: non-integral determinant");
        out->curves.push_back(OracleSolution{std::move(c), mult});
        out->total += mult;
    }
};

}  // namespace

void OracleProblem::validate() const {
    if (n < 1) throw std::invalid_argument("oracle: needs at least one point");
    int conds = n + static_cast<int>(dev.size()) + static_cast<int>(cross.size()) +
                static_cast<int>(deg_cross.size());
    if (conds != static_cast<int>(degree.size()) - 1)
        throw std::invalid_argument(
            "oracle: conditions do not match the degree (need n + #heights + "
            "#cross-ratios == |degree| - 1)");
    auto check_ref = [&](const EndRef& r) {
        if (r.is_point ? (r.idx < 1 || r.idx > n)
                       : (r.idx < 1 || r.idx > static_cast<int>(degree.size())))
            throw std::invalid_argument("oracle: reference out of range: " +
                                        r.str());
    };
    for (const auto& cr : cross) {
        if (!cr.length) throw std::invalid_argument("oracle: missing length");
        for (const auto& r : cr.refs) check_ref(r);
    }
    for (const auto& lam : deg_cross)
        for (const auto& r : lam.refs) check_ref(r);
    for (int t : dev)
        if (t < 1 || t > static_cast<int>(degree.size()))
            throw std::invalid_argument("oracle: end height label out of range");
}

std::vector<CrossRatio> OracleProblem::realized_cross() const {
    std::vector<CrossRatio> out = cross;
    for (size_t j = 0; j < deg_cross.size(); ++j)
        out.push_back(deg_cross[j].with_default_pairing(
            Rat(1, static_cast<long long>(j) + 2)));
    return out;
}

OracleResult oracle_solve(const OracleProblem& p, const OracleConfig& cfg) {
    p.validate();
    if (static_cast<int>(cfg.points.size()) != p.n ||
        cfg.heights.size() != p.dev.size())
        throw std::invalid_argument("oracle: configuration size mismatch");
    OracleResult res;
    res.config = cfg;
    Enumerator en(p, cfg);
    en.run(&res);
    if (en.degenerate_hit)
        throw std::runtime_error("oracle: configuration is not generic");
    return res;
}

OracleResult oracle_solve(const OracleProblem& p, unsigned seed) {
    p.validate();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long long> coord(-1000000, 1000000);
    for (int attempt = 0; attempt < 32; ++attempt) {
        OracleConfig cfg;
        bool distinct = true;
        for (int j = 0; j < p.n; ++j)
            cfg.points.push_back(RatVec2{Rat(coord(rng)), Rat(coord(rng))});
        for (size_t i = 0; i < p.dev.size(); ++i)
            cfg.heights.push_back(Rat(coord(rng)));
        for (int a = 0; a < p.n && distinct; ++a)
            for (int b = a + 1; b < p.n; ++b)
                if (cfg.points[a] == cfg.points[b]) distinct = false;
        if (!distinct) continue;
        OracleResult res;
        res.config = cfg;
        res.resamples = attempt;
        Enumerator en(p, cfg);
        en.run(&res);
        if (!en.degenerate_hit) return res;
    }
    throw std::runtime_error("oracle: no generic configuration found");
}

Int oracle_count(const OracleProblem& p, unsigned seed) {
    return oracle_solve(p, seed).total;
}

}  // namespace tropcr
