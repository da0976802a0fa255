// cospec: command-line driver for the experiments.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cospec/cospec.hpp"

namespace {

using namespace cospec;
using nlohmann::json;

struct Common {
    std::string n_range;
    std::size_t n = 0;
    std::string p = "1/2";
    std::int64_t level = 2;
    std::uint64_t trials = 100;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    bool quotient = false;
    unsigned workers = 1;
};

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    try {
        std::size_t used = 0;
        if (colon == std::string::npos) {
            const std::size_t n = std::stoul(text, &used);
            if (used != text.size()) throw ParseError("trailing characters");
            return {n, n};
        }
        const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
        const std::size_t lo = std::stoul(a, &used);
        if (used != a.size()) throw ParseError("trailing characters");
        const std::size_t hi = std::stoul(b, &used);
        if (used != b.size()) throw ParseError("trailing characters");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw ParseError("cannot parse n-range '" + text + "' (expected N or LO:HI)");
    }
}

ExperimentConfig make_config(const Common& c, ExperimentKind kind) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    if (!c.n_range.empty()) {
        std::tie(cfg.n_min, cfg.n_max) = parse_range(c.n_range);
    } else if (c.n > 0) {
        cfg.n_min = cfg.n_max = c.n;
    } else {
        throw PreconditionError("one of --n or --n-range is required");
    }
    cfg.p = parse_probability(c.p);
    cfg.level = c.level;
    cfg.trials = c.trials;
    cfg.master_seed = c.seed;
    cfg.quotient_signed_perms = c.quotient;
    cfg.workers = c.workers;
    cfg.validate();
    return cfg;
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw IoError("cannot open '" + c.out + "' for writing");
    f << text;
    if (!f) throw IoError("write to '" + c.out + "' failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void add_common(CLI::App* sub, Common& c, bool sampling) {
    sub->add_option("--n", c.n, "Graph order");
    sub->add_option("--n-range", c.n_range, "Order range LO:HI (inclusive)");
    sub->add_option("--p", c.p, "Edge probability NUM/DEN")->capture_default_str();
    sub->add_option("--level", c.level, "Level bound l")->capture_default_str();
    if (sampling) {
        sub->add_option("--trials", c.trials, "Number of sampled graphs")->capture_default_str();
        sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
        sub->add_option("--workers", c.workers, "Worker threads (output does not depend on this)")->capture_default_str();
    }
    sub->add_option("--out", c.out, "Output path (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_flag("--quotient-signed-perms", c.quotient, "Enumerate one conjugator per signed-permutation orbit");
}

json bounds_json(const std::vector<BoundsRow>& rows) {
    json out = json::array();
    for (const auto& r : rows)
        out.push_back({{"n", r.n},
                       {"level", r.level},
                       {"p_hat", r.p_hat.get_str()},
                       {"epsilon_n", r.eps.epsilon.to_string(12)},
                       {"series_bound", r.eps.series_bound ? json(r.eps.series_bound->to_string(12)) : json(nullptr)},
                       {"vacuous", !r.eps.below_one},
                       {"n_star", r.n_star ? json(*r.n_star) : json(nullptr)},
                       {"count_bound_bits", mpz_sizeinbase(r.count_bound.get_mpz_t(), 2)}});
    return out;
}

RationalOrthogonalMatrix read_matrix_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open matrix file '" + path + "'");
    auto all = read_matrices(f);
    if (all.size() != 1) throw ParseError("'" + path + "' must hold exactly one matrix, found " + std::to_string(all.size()));
    return RationalOrthogonalMatrix(all.front());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rational orthogonal conjugators, cospectral mates and the bounds around them"};
    app.require_subcommand(1);

    Common c;
    auto* sweep = app.add_subcommand("sweep-controllability", "Fraction of controllable graphs in G(n, p)");
    add_common(sweep, c, true);

    std::string matrix_path;
    auto* lemma = app.add_subcommand("lemma-mc", "Monte Carlo estimate of Pr(Q^T A Q integral)");
    add_common(lemma, c, true);
    lemma->add_option("--matrix", matrix_path, "Orthogonal matrix file (exact fractions, one row per line)")->required();

    std::string graph6;
    auto* mates = app.add_subcommand("mate-scan", "Search sampled graphs for bounded-level cospectral mates");
    add_common(mates, c, true);
    mates->add_option("--graph", graph6, "Search this graph6 graph instead of sampling");

    auto* census = app.add_subcommand("census", "Exhaustive cospectral pairs up to isomorphism");
    add_common(census, c, false);

    std::string mode = "exact";
    bool count_only = false;
    auto* enum_ortho = app.add_subcommand("enum-ortho", "Enumerate rational orthogonal matrices at a level");
    add_common(enum_ortho, c, false);
    enum_ortho->add_option("--mode", mode, "exact or divides")->check(CLI::IsMember({"exact", "divides"}))->capture_default_str();
    enum_ortho->add_flag("--count", count_only, "Print only the number of matrices");

    auto* bounds = app.add_subcommand("bounds", "Tabulate epsilon_n, the series bound and n*");
    add_common(bounds, c, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const bool as_json = c.format == "json";
        if (*sweep) {
            const auto rows = run_controllability_sweep(make_config(c, ExperimentKind::controllability_sweep));
            if (as_json) {
                json out = json::array();
                for (const auto& r : rows)
                    out.push_back({{"n", r.n},
                                   {"p", r.p.to_string()},
                                   {"trials", r.trials},
                                   {"controllable_count", r.controllable},
                                   {"frequency", r.frequency().get_str()}});
                emit(c, dump(out));
            } else {
                emit(c, controllability_csv(rows));
            }
        } else if (*lemma) {
            const auto q = read_matrix_file(matrix_path);
            const CanMatrix can = CanMatrix::from_canonical_form(canonical_form(q));
            ExperimentConfig cfg;
            if (c.n == 0 && c.n_range.empty()) c.n = q.order();
            cfg = make_config(c, ExperimentKind::lemma_mc);
            if (cfg.n_min != q.order() || cfg.n_max != q.order())
                throw DimensionError("--n does not match the matrix order " + std::to_string(q.order()));
            const auto rep = run_lemma_mc(cfg, can);
            emit(c, as_json ? dump(lemma_mc_json(rep)) : lemma_mc_csv(rep));
        } else if (*mates) {
            if (!graph6.empty()) {
                const Graph g = from_graph6(graph6);
                MateSearchOptions opts;
                opts.enumeration.quotient_signed_perms = c.quotient;
                opts.enumeration.max_order = kEnumerationLimit;
                json certs = json::array();
                std::string csv = "G,H,level,generalized\n";
                for (const auto& cert : find_mates(g, c.level, opts)) {
                    certs.push_back(certificate_to_json(cert));
                    csv += to_graph6(cert.G) + "," + to_graph6(cert.H) + "," + std::to_string(cert.level) + "," +
                           (cert.generalized ? "1" : "0") + "\n";
                }
                emit(c, as_json ? dump(json{{"graph", graph6}, {"level", c.level}, {"certificates", certs}}) : csv);
            } else {
                const auto rep = run_mate_scan(make_config(c, ExperimentKind::mate_scan));
                emit(c, as_json ? dump(mate_scan_json(rep)) : mate_scan_csv(rep));
            }
        } else if (*census) {
            const auto cfg = make_config(c, ExperimentKind::census);
            json out = json::array();
            std::string csv = "n,G,H\n";
            for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n)
                for (const auto& [g, h] : cospectral_census(n)) {
                    out.push_back({{"n", n}, {"G", to_graph6(g)}, {"H", to_graph6(h)}});
                    csv += std::to_string(n) + "," + to_graph6(g) + "," + to_graph6(h) + "\n";
                }
            emit(c, as_json ? dump(out) : csv);
        } else if (*enum_ortho) {
            const auto cfg = make_config(c, ExperimentKind::enum_ortho);
            if (cfg.n_min != cfg.n_max) throw PreconditionError("enum-ortho takes a single n");
            EnumerationOptions opts;
            opts.quotient_signed_perms = c.quotient;
            const LevelMode lm = mode == "exact" ? LevelMode::exact : LevelMode::divides;
            if (count_only) {
                emit(c, std::to_string(count_level(cfg.n_min, cfg.level, lm, opts)) + "\n");
            } else {
                std::ostringstream text;
                json out = json::array();
                enumerate_level(
                    cfg.n_min, cfg.level, lm,
                    [&](const RationalOrthogonalMatrix& q) {
                        if (as_json) out.push_back({{"level", q.level().get_str()}, {"Q", matrix_rows_text(q.matrix())}});
                        else text << format_matrix(q.matrix()) << '\n';
                        return true;
                    },
                    opts);
                emit(c, as_json ? dump(out) : text.str());
            }
        } else if (*bounds) {
            const auto rows = run_bounds(make_config(c, ExperimentKind::bounds));
            emit(c, as_json ? dump(bounds_json(rows)) : bounds_csv(rows));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.class_name() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: InternalError: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
