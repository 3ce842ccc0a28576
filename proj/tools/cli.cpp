// Command line front end: count / check / list / export over json problem
// files. Exit codes: 0 success, 2 validation error, 3 cross-check mismatch,
// 4 resource limit.

#include "tropcr/problem.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact counts of rational tropical plane curves with "
                 "cross-ratio constraints"};
    app.require_subcommand(1);

    std::string file, algorithm = "cross-check", emit = "text";
    unsigned seed = 0;
    bool unlabeled = false, canonical = false;

    auto add_common = [&](CLI::App* sub, bool with_emit) {
        sub->add_option("file", file, "json problem file")->required();
        sub->add_option("--algorithm", algorithm,
                        "oracle | lattice-path | floor | cross-check");
        sub->add_option("--seed", seed, "override the problem seed");
        if (with_emit)
            sub->add_option("--emit", emit, "json | listing | dot | text");
        sub->add_flag("--unlabeled", unlabeled,
                      "report the unlabeled count and the relabel factor");
        sub->add_flag("--canonical", canonical,
                      "byte-stable json (no timing field)");
    };
    CLI::App* count = app.add_subcommand("count", "count curves");
    add_common(count, true);
    CLI::App* check = app.add_subcommand("check", "validate a problem file");
    check->add_option("file", file, "json problem file")->required();
    CLI::App* list = app.add_subcommand("list", "counted objects with "
                                                "multiplicity factorizations");
    add_common(list, false);
    CLI::App* exp = app.add_subcommand("export", "graphviz/json export of "
                                                 "the counted objects");
    add_common(exp, true);

    CLI11_PARSE(app, argc, argv);

    try {
        tropcr::ProblemFile p = tropcr::parse_problem(slurp(file));
        if (seed != 0) p.seed = seed;
        if (check->parsed()) {
            std::cout << tropcr::problem_to_json(p) << "\n";
            return 0;
        }
        bool want_objects = list->parsed() || exp->parsed() || emit == "json" ||
                            emit == "dot" || emit == "listing";
        tropcr::ResultReport r = tropcr::run_count(p, algorithm, want_objects);
        if (list->parsed()) {
            std::cout << tropcr::emit_listing(r);
        } else if (exp->parsed()) {
            if (emit == "json" || emit == "listing")
                std::cout << (emit == "json" ? tropcr::emit_json(p, r, canonical)
                                             : tropcr::emit_listing(r));
            else
                std::cout << tropcr::emit_dot(r);
        } else if (emit == "json") {
            std::cout << tropcr::emit_json(p, r, canonical);
        } else if (emit == "dot") {
            std::cout << tropcr::emit_dot(r);
        } else if (emit == "listing") {
            std::cout << tropcr::emit_listing(r);
        } else {
            std::cout << "count " << r.count;
            if (unlabeled)
                std::cout << "  unlabeled " << r.unlabeled << " (factor "
                          << r.relabel_factor << ")";
            std::cout << "  [" << r.algorithm;
            for (const auto& [alg, cnt] : r.cross_results)
                std::cout << " " << alg << "=" << cnt;
            std::cout << "]\n";
        }
        return 0;
    } catch (const tropcr::CrossCheckMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const tropcr::ResourceLimit& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
