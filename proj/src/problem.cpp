#include "tropcr/problem.hpp"

#include "tropcr/floor_diagrams.hpp"
#include "tropcr/lattice_paths.hpp"
#include "tropcr/oracle.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace tropcr {

using nlohmann::json;

namespace {

EndRef parse_ref(const std::string& s) {
    if (s.size() < 2 || (s[0] != 'x' && s[0] != 'e'))
        throw std::invalid_argument("unresolved reference: " + s);
    int idx;
    try {
        size_t used;
        idx = std::stoi(s.substr(1), &used);
        if (used + 1 != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("unresolved reference: " + s);
    }
    if (idx < 1) throw std::invalid_argument("unresolved reference: " + s);
    return s[0] == 'x' ? EndRef::point(idx) : EndRef::end(idx);
}

Rat parse_rat(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        size_t slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rat(Int(s));
            return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
        } catch (const std::exception&) {
        }
    }
    throw std::invalid_argument("bad rational: " + j.dump());
}

Degree parse_degree(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw std::invalid_argument("degree block needs a type");
    std::string ty = j.at("type").get<std::string>();
    if (ty == "delta_d") return delta_d(j.at("d").get<int>());
    if (ty == "hirzebruch")
        return hirzebruch(j.at("s").get<int>(), j.at("b").get<int>(),
                          j.at("alpha").get<std::vector<int>>(),
                          j.at("beta").get<std::vector<int>>());
    if (ty == "polytope") {
        std::vector<IntVec2> verts;
        for (const auto& v : j.at("vertices"))
            verts.push_back({v.at(0).get<long long>(), v.at(1).get<long long>()});
        auto parts = j.at("partitions").get<std::vector<std::vector<int>>>();
        return degree_from_polytope(LatticePolytope(std::move(verts)), parts);
    }
    throw std::invalid_argument("unknown degree type: " + ty);
}

// The size d when the degree equals delta_d(d), otherwise 0.
int delta_of(const Degree& deg) {
    if (deg.size() % 3 != 0 || deg.size() == 0) return 0;
    int d = deg.size() / 3;
    Degree ref = delta_d(d);
    for (int t = 1; t <= deg.size(); ++t)
        if (!(deg.dir(t) == ref.dir(t))) return 0;
    return d;
}

Int relabel_factor(const ProblemFile& p) {
    auto pinned = [&](int t) {
        for (const CrossRatio& cr : p.cross)
            for (const EndRef& r : cr.refs)
                if (!r.is_point && r.idx == t) return true;
        for (const DegCrossRatio& lam : p.deg_cross)
            for (const EndRef& r : lam.refs)
                if (!r.is_point && r.idx == t) return true;
        return false;
    };
    // labels with the same direction vector and no cross-ratio pinning them
    // are interchangeable
    std::vector<IntVec2> dirs;
    Int f = 1;
    for (const DegreeEntry& e : p.degree.entries()) {
        if (std::find(dirs.begin(), dirs.end(), e.dir) != dirs.end()) continue;
        dirs.push_back(e.dir);
        Int cnt = 0;
        for (const DegreeEntry& g : p.degree.entries())
            if (g.dir == e.dir && !pinned(g.label)) ++cnt;
        for (Int i = 2; i <= cnt; ++i) f *= i;
    }
    return f;
}

std::string dot_curve(const StableMap& c) {
    std::ostringstream os;
    os << "graph curve {\n";
    const MarkedTree& t = c.tree;
    for (int j = 1; j <= t.n(); ++j)
        os << "  n" << t.node_of_leaf(j) << " [label=\"x" << j
           << "\" shape=plaintext];\n";
    for (int e = 1; e <= t.m(); ++e)
        os << "  n" << t.node_of_leaf(t.n() + e) << " [label=\"e" << e << " "
           << c.degree.dir(e).str() << "\" shape=plaintext];\n";
    for (int v = t.num_leaves(); v < t.num_nodes(); ++v)
        os << "  n" << v << " [shape=point];\n";
    for (int e = 0; e < static_cast<int>(t.edges().size()); ++e) {
        os << "  n" << t.edges()[e].u << " -- n" << t.edges()[e].v;
        if (!t.is_end_edge(e)) {
            os << " [label=\"w=" << c.weight(e);
            if (c.has_geometry()) os << " l=" << rat_str(c.edge_length[e]);
            os << "\"]";
        }
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string dot_floor(const FloorDiagram& f,
                      const std::vector<int>& lam_count) {
    std::ostringstream os;
    os << "graph floor_diagram {\n";
    for (size_t v = 0; v < f.size_v.size(); ++v)
        os << "  v" << v << " [label=\"v" << v + 1 << " s=" << f.size_v[v]
           << " ends=" << f.ends_v[v] << " lam=" << lam_count[v] << "\"];\n";
    for (size_t e = 0; e < f.edges.size(); ++e)
        os << "  v" << f.edges[e][0] << " -- v" << f.edges[e][1]
           << " [label=\"w=" << f.weight[e]
           << (f.thick_at_min[e] ? " thick@min" : " thin@min") << "\"];\n";
    os << "}\n";
    return os.str();
}

ResultReport run_single(const ProblemFile& p, const std::string& algorithm,
                        bool with_objects) {
    ResultReport r;
    r.algorithm = algorithm;
    r.seed = p.seed;
    if (algorithm == "oracle") {
        if (p.n + p.degree.size() > 12)
            throw ResourceLimit("oracle: instance too large");
        OracleProblem op;
        op.degree = p.degree;
        op.n = p.n;
        op.cross = p.cross;
        op.deg_cross = p.deg_cross;
        OracleResult res = oracle_solve(op, p.seed);
        r.count = res.total;
        if (with_objects)
            for (const OracleSolution& sol : res.curves)
                r.objects.push_back({"curve", sol.curve.canonical_string(),
                                     sol.mult, sol.mult, Int(1),
                                     dot_curve(sol.curve)});
    } else if (algorithm == "lattice-path") {
        int d = delta_of(p.degree);
        if (d == 0)
            throw std::invalid_argument(
                "lattice-path: degree must be a triangle degree delta_d");
        if (!p.cross.empty())
            throw std::invalid_argument(
                "lattice-path: cross-ratios must be degenerated");
        if (d > 4) throw ResourceLimit("lattice-path: degree too large");
        LpaCount res = lpa_count(d, p.n, p.deg_cross, with_objects);
        r.count = res.labeled;
        if (with_objects)
            for (const DualCurve& dc : res.details) {
                StableMap c(dc.tree, p.degree);
                r.objects.push_back({"curve", dc.canonical, dc.mult, dc.mult_ev,
                                     dc.omega, dot_curve(c)});
            }
    } else if (algorithm == "floor") {
        int d = delta_of(p.degree);
        if (d == 0)
            throw std::invalid_argument(
                "floor: degree must be a triangle degree delta_d");
        if (!p.cross.empty())
            throw std::invalid_argument(
                "floor: cross-ratios must be degenerated");
        for (const DegCrossRatio& lam : p.deg_cross)
            for (const EndRef& ref : lam.refs)
                if (!ref.is_point)
                    throw std::invalid_argument(
                        "floor: cross-ratio entries must be marked points");
        if (d > 5) throw ResourceLimit("floor: degree too large");
        FloorCount res = floor_count(d, p.n, p.deg_cross, p.seed, with_objects);
        r.count = res.total;
        if (with_objects)
            for (const auto& [f, contrib] : res.contributions) {
                std::vector<int> lc(f.size_v.size(), 0);
                for (int v : f.lambda_vertex) ++lc[v];
                Int labels = label_distribution_factor(f);
                r.objects.push_back({"floor-diagram", f.str(), contrib,
                                     contrib / labels, labels,
                                     dot_floor(f, lc)});
            }
    } else {
        throw std::invalid_argument("unknown algorithm: " + algorithm);
    }
    r.relabel_factor = relabel_factor(p);
    r.unlabeled = r.count % r.relabel_factor == 0 ? r.count / r.relabel_factor
                                                  : Int(0);
    return r;
}

json problem_block(const ProblemFile& p) {
    json j;
    j["degree"] = json::parse(p.degree_spec);
    j["n"] = p.n;
    json crs = json::array();
    for (const CrossRatio& cr : p.cross) {
        json e;
        e["refs"] = {cr.refs[0].str(), cr.refs[1].str(), cr.refs[2].str(),
                     cr.refs[3].str()};
        e["length"] = rat_str(*cr.length);
        crs.push_back(e);
    }
    for (const DegCrossRatio& lam : p.deg_cross) {
        json e;
        e["refs"] = {lam.refs[0].str(), lam.refs[1].str(), lam.refs[2].str(),
                     lam.refs[3].str()};
        crs.push_back(e);
    }
    j["cross_ratios"] = crs;
    j["seed"] = p.seed;
    return j;
}

}  // namespace

bool ProblemFile::operator==(const ProblemFile& o) const {
    if (n != o.n || seed != o.seed || degree.size() != o.degree.size())
        return false;
    for (int t = 1; t <= degree.size(); ++t)
        if (!(degree.dir(t) == o.degree.dir(t))) return false;
    if (cross.size() != o.cross.size() || deg_cross.size() != o.deg_cross.size())
        return false;
    for (size_t i = 0; i < cross.size(); ++i)
        if (cross[i].refs != o.cross[i].refs ||
            cross[i].length != o.cross[i].length)
            return false;
    for (size_t i = 0; i < deg_cross.size(); ++i)
        if (deg_cross[i].refs != o.deg_cross[i].refs) return false;
    return true;
}

ProblemFile parse_problem(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("problem file: ") + e.what());
    }
    ProblemFile p;
    try {
        p.degree = parse_degree(j.at("degree"));
        p.degree_spec = j.at("degree").dump();
        p.n = j.at("n").get<int>();
        p.seed = j.value("seed", 1u);
        for (const auto& e : j.value("cross_ratios", json::array())) {
            std::array<EndRef, 4> refs;
            const json& rj = e.is_array() ? e : e.at("refs");
            if (rj.size() != 4)
                throw std::invalid_argument("cross-ratio needs four refs");
            for (int i = 0; i < 4; ++i)
                refs[i] = parse_ref(rj.at(i).get<std::string>());
            for (int i = 0; i < 4; ++i)
                for (int k = i + 1; k < 4; ++k)
                    if (refs[i] == refs[k])
                        throw std::invalid_argument("degenerate cross-ratio");
            if (e.is_object() && e.contains("length"))
                p.cross.push_back(CrossRatio(refs, parse_rat(e.at("length"))));
            else
                p.deg_cross.push_back(DegCrossRatio(refs));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("problem file: ") + e.what());
    }
    if (p.n < 1) throw std::invalid_argument("problem file: n must be >= 1");
    int l = static_cast<int>(p.cross.size() + p.deg_cross.size());
    if (p.n + l != p.degree.size() - 1)
        throw std::invalid_argument("condition count mismatch");
    auto check_ref = [&](const EndRef& r) {
        if (r.is_point ? r.idx > p.n : r.idx > p.degree.size())
            throw std::invalid_argument("unresolved reference: " + r.str());
    };
    for (const CrossRatio& cr : p.cross)
        for (const EndRef& r : cr.refs) check_ref(r);
    for (const DegCrossRatio& lam : p.deg_cross)
        for (const EndRef& r : lam.refs) check_ref(r);
    std::vector<Rat> lens;
    for (const CrossRatio& cr : p.cross) lens.push_back(*cr.length);
    std::sort(lens.begin(), lens.end());
    if (std::adjacent_find(lens.begin(), lens.end()) != lens.end())
        throw std::invalid_argument("cross-ratio lengths must be distinct");
    return p;
}

std::string problem_to_json(const ProblemFile& p) {
    return problem_block(p).dump(2);
}

ResultReport run_count(const ProblemFile& p, const std::string& algorithm,
                       bool with_objects) {
    auto t0 = std::chrono::steady_clock::now();
    ResultReport r;
    if (algorithm == "cross-check") {
        bool first = true;
        std::vector<std::pair<std::string, Int>> totals;
        for (const char* alg : {"oracle", "lattice-path", "floor"}) {
            try {
                ResultReport one = run_single(p, alg, with_objects && first);
                totals.push_back({alg, one.count});
                if (first) {
                    one.algorithm = "cross-check";
                    r = std::move(one);
                    first = false;
                }
            } catch (const std::invalid_argument&) {
            } catch (const ResourceLimit&) {
            }
        }
        r.cross_results = std::move(totals);
        if (r.cross_results.empty())
            throw std::invalid_argument("cross-check: no applicable algorithm");
        for (const auto& [alg, cnt] : r.cross_results)
            if (cnt != r.count) {
                std::string diff = "cross-check mismatch:";
                for (const auto& [a, c] : r.cross_results)
                    diff += " " + a + "=" + c.str();
                throw CrossCheckMismatch(diff);
            }
    } else {
        r = run_single(p, algorithm, with_objects);
    }
    r.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
    return r;
}

std::string emit_json(const ProblemFile& p, const ResultReport& r,
                      bool canonical) {
    json j;
    j["schema_version"] = 1;
    j["problem"] = problem_block(p);
    json res;
    res["algorithm"] = r.algorithm;
    res["count"] = r.count.str();
    res["unlabeled"] = r.unlabeled.str();
    res["relabel_factor"] = r.relabel_factor.str();
    res["seed"] = r.seed;
    if (!canonical) res["millis"] = r.millis;
    if (!r.cross_results.empty()) {
        json cc = json::object();
        for (const auto& [alg, cnt] : r.cross_results) cc[alg] = cnt.str();
        res["cross_results"] = cc;
    }
    json objs = json::array();
    for (const ObjectRecord& o : r.objects) {
        json e;
        e["kind"] = o.kind;
        e["summary"] = o.summary;
        e["mult"] = o.mult.str();
        e["mult_ev"] = o.mult_ev.str();
        e["omega"] = o.omega.str();
        objs.push_back(e);
    }
    res["objects"] = objs;
    j["result"] = res;
    return j.dump(2) + "\n";
}

std::string emit_listing(const ResultReport& r) {
    std::ostringstream os;
    os << "algorithm: " << r.algorithm << "  count: " << r.count
       << "  unlabeled: " << r.unlabeled << " (factor " << r.relabel_factor
       << ")\n";
    for (const auto& [alg, cnt] : r.cross_results)
        os << "  " << alg << ": " << cnt << "\n";
    for (size_t i = 0; i < r.objects.size(); ++i) {
        const ObjectRecord& o = r.objects[i];
        os << i + 1 << ". [" << o.kind << "] mult " << o.mult << " = "
           << o.mult_ev << " * " << o.omega << "  " << o.summary << "\n";
    }
    return os.str();
}

std::string emit_dot(const ResultReport& r) {
    std::string out;
    for (const ObjectRecord& o : r.objects) out += o.dot + "\n";
    return out;
}

}  // namespace tropcr
