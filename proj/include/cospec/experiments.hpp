#pragma once

// Desk-scale Monte Carlo and tabulation runs. Each trial draws its graph from
// (master_seed, trial_index) alone, so outputs are identical for any worker count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cospectral_search.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "graph6.hpp"
#include "ortho.hpp"
#include "proof_verifier.hpp"

namespace cospec {

enum class ExperimentKind { controllability_sweep, lemma_mc, mate_scan, census, enum_ortho, bounds };

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::controllability_sweep;
    std::size_t n_min = 1, n_max = 1;
    Probability p{1, 2};
    std::int64_t level = 2;
    std::uint64_t trials = 100;
    std::uint64_t master_seed = 0;
    bool quotient_signed_perms = false;
    unsigned workers = 1;

    void validate() const {
        if (trials < 1) throw PreconditionError("trials must be at least 1");
        if (n_min > n_max) throw PreconditionError("n-range is empty");
        if (level < 1) throw PreconditionError("level must be positive");
    }
};

struct TrialRecord {
    std::uint64_t trial_index = 0;
    std::string graph6;
    std::optional<bool> controllable;
    std::optional<bool> integral_conjugation;
    std::optional<bool> mate_found;
    std::optional<bool> generalized_mate_found;
    double seconds = 0; // excluded from all deterministic outputs
};

/// Runs body(trial) for every trial on `workers` threads; results are stored by trial index.
template <typename Result, typename Body>
std::vector<Result> run_trials(std::uint64_t trials, unsigned workers, Body body) {
    std::vector<Result> out(trials);
    workers = std::max(1u, workers);
    if (workers == 1 || trials == 1) {
        for (std::uint64_t t = 0; t < trials; ++t) out[t] = body(t);
        return out;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_lock;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::uint64_t t = w; t < trials; t += workers) out[t] = body(t);
            } catch (...) {
                std::lock_guard lock(failure_lock);
                if (!failure) failure = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

inline std::string exact_fraction(std::uint64_t num, std::uint64_t den) {
    return make_rational(Integer(static_cast<unsigned long>(num)), Integer(static_cast<unsigned long>(den))).get_str();
}

// ---------------------------------------------------------------------------
// Controllability sweep

struct ControllabilityRow {
    std::size_t n = 0;
    Probability p;
    std::uint64_t trials = 0;
    std::uint64_t controllable = 0;
    Rational frequency() const {
        return make_rational(Integer(static_cast<unsigned long>(controllable)), Integer(static_cast<unsigned long>(trials)));
    }
};

inline std::vector<ControllabilityRow> run_controllability_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<ControllabilityRow> rows;
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
        const GnpSampler sampler(n, cfg.p, cfg.master_seed);
        auto hits = run_trials<char>(cfg.trials, cfg.workers,
                                     [&](std::uint64_t t) -> char { return is_controllable(sampler.sample(t)) ? 1 : 0; });
        ControllabilityRow r{n, cfg.p, cfg.trials, 0};
        for (char h : hits) r.controllable += static_cast<std::uint64_t>(h);
        rows.push_back(r);
    }
    return rows;
}

inline std::string controllability_csv(const std::vector<ControllabilityRow>& rows) {
    std::ostringstream os;
    os << "n,p,trials,controllable_count,frequency\n";
    for (const auto& r : rows)
        os << r.n << ',' << r.p.to_string() << ',' << r.trials << ',' << r.controllable << ','
           << r.frequency().get_str() << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Lemma Monte Carlo

/// z with Phi(z) = 0.99.
inline constexpr double kWilsonZ99 = 2.3263478740408408;

/// Lower end of the one-sided Wilson score interval for k successes in n trials.
inline double wilson_lower(std::uint64_t k, std::uint64_t n, double z = kWilsonZ99) {
    const double nn = static_cast<double>(n), ph = static_cast<double>(k) / nn, z2 = z * z;
    const double centre = ph + z2 / (2 * nn);
    const double spread = z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn));
    return std::max(0.0, (centre - spread) / (1 + z2 / nn));
}

struct LemmaMcReport {
    std::size_t n = 0, s = 0;
    std::int64_t level = 1;
    Probability p;
    std::uint64_t trials = 0;
    std::uint64_t integral_count = 0;
    Rational frequency;
    BoundReport bound;
    double wilson_margin = 0; // frequency - wilson lower bound
    bool consistent = false;  // frequency <= selected bound + margin
    std::vector<TrialRecord> records;
};

/// Samples A from G(n, p) and counts trials with Q^T A Q integral.
inline LemmaMcReport run_lemma_mc(const ExperimentConfig& cfg, const CanMatrix& q) {
    cfg.validate();
    if (q.block_size() < 2) throw PreconditionError("lemma-mc needs a fractional block (s >= 2); signed permutations make the bound vacuous");
    const std::size_t n = q.order();
    LemmaMcReport rep;
    rep.n = n;
    rep.s = q.block_size();
    rep.level = q.level();
    rep.p = cfg.p;
    rep.trials = cfg.trials;
    rep.bound = lemma_bound(q, cfg.p);

    const GnpSampler sampler(n, cfg.p, cfg.master_seed);
    const ScaledOrthogonal& sq = q.scaled();
    const std::int64_t d2 = sq.denom * sq.denom;
    rep.records = run_trials<TrialRecord>(cfg.trials, cfg.workers, [&](std::uint64_t t) {
        const auto start = std::chrono::steady_clock::now();
        const Graph g = sampler.sample(t);
        const auto b = detail::scaled_conjugate(sq, detail::small_matrix(adjacency(g)));
        bool integral = true;
        for (auto x : b) integral = integral && x % d2 == 0;
        TrialRecord rec;
        rec.trial_index = t;
        rec.graph6 = to_graph6(g);
        rec.integral_conjugation = integral;
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return rec;
    });
    for (const auto& r : rep.records) rep.integral_count += *r.integral_conjugation ? 1 : 0;
    rep.frequency = make_rational(Integer(static_cast<unsigned long>(rep.integral_count)),
                                  Integer(static_cast<unsigned long>(rep.trials)));
    rep.wilson_margin = rep.frequency.get_d() - wilson_lower(rep.integral_count, rep.trials);
    rep.consistent = wilson_lower(rep.integral_count, rep.trials) <= rep.bound.selected_bound.get_d();
    return rep;
}

inline nlohmann::json lemma_mc_json(const LemmaMcReport& r) {
    return nlohmann::json{{"n", r.n},
                          {"s", r.s},
                          {"level", r.level},
                          {"p", r.p.to_string()},
                          {"p_hat", r.bound.p_hat.get_str()},
                          {"trials", r.trials},
                          {"integral_count", r.integral_count},
                          {"frequency", r.frequency.get_str()},
                          {"I", r.bound.I_size},
                          {"J", r.bound.J_size},
                          {"selected_bound", r.bound.selected_bound.get_str()},
                          {"closed_form_exponent", r.bound.closed_form_exponent.get_str()},
                          {"vacuous", r.bound.vacuous},
                          {"wilson_margin_99", r.wilson_margin},
                          {"consistent", r.consistent}};
}

inline std::string lemma_mc_csv(const LemmaMcReport& r) {
    std::ostringstream os;
    os << "n,s,level,p,trials,integral_count,frequency,selected_bound,closed_form_exponent,wilson_margin_99,consistent\n";
    char margin[32];
    std::snprintf(margin, sizeof margin, "%.9f", r.wilson_margin);
    os << r.n << ',' << r.s << ',' << r.level << ',' << r.p.to_string() << ',' << r.trials << ',' << r.integral_count
       << ',' << r.frequency.get_str() << ',' << r.bound.selected_bound.get_str() << ','
       << r.bound.closed_form_exponent.get_str() << ',' << margin << ',' << (r.consistent ? 1 : 0) << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Mate scan

struct MateScanReport {
    std::size_t n = 0;
    std::int64_t level = 1;
    Probability p;
    std::uint64_t trials = 0;
    std::uint64_t with_mate = 0;
    std::uint64_t with_generalized_mate = 0;
    std::vector<std::pair<std::uint64_t, MateCertificate>> certificates; // (trial, certificate)
    std::uint64_t reverify_failures = 0;
    std::uint64_t divisibility_checked = 0;
    std::uint64_t divisibility_violations = 0;
    std::uint64_t divisibility_skipped = 0; // generalized certificates of non-controllable graphs
    std::vector<TrialRecord> records;

    Rational frequency() const {
        return make_rational(Integer(static_cast<unsigned long>(with_mate)), Integer(static_cast<unsigned long>(trials)));
    }
};

inline MateScanReport run_mate_scan(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.n_min != cfg.n_max) throw PreconditionError("mate-scan takes a single n");
    const std::size_t n = cfg.n_min;
    if (n > kEnumerationLimit) throw GuardError("mate-scan: n exceeds " + std::to_string(kEnumerationLimit));
    MateScanReport rep;
    rep.n = n;
    rep.level = cfg.level;
    rep.p = cfg.p;
    rep.trials = cfg.trials;
    const GnpSampler sampler(n, cfg.p, cfg.master_seed);
    MateSearchOptions plain;
    plain.enumeration.quotient_signed_perms = cfg.quotient_signed_perms;
    plain.enumeration.max_order = kEnumerationLimit;
    MateSearchOptions general = plain;
    general.require_generalized = true;

    struct Outcome {
        TrialRecord record;
        std::vector<MateCertificate> plain, general;
    };
    auto outcomes = run_trials<Outcome>(cfg.trials, cfg.workers, [&](std::uint64_t t) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        const Graph g = sampler.sample(t);
        o.plain = find_mates(g, cfg.level, plain);
        o.general = find_mates(g, cfg.level, general);
        o.record.trial_index = t;
        o.record.graph6 = to_graph6(g);
        o.record.mate_found = !o.plain.empty();
        o.record.generalized_mate_found = !o.general.empty();
        o.record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return o;
    });
    for (auto& o : outcomes) {
        rep.with_mate += *o.record.mate_found ? 1 : 0;
        rep.with_generalized_mate += *o.record.generalized_mate_found ? 1 : 0;
        for (auto* list : {&o.plain, &o.general})
            for (auto& c : *list) {
                if (!reverify_certificate(c).empty()) ++rep.reverify_failures;
                rep.certificates.emplace_back(o.record.trial_index, c);
            }
        for (const auto& c : o.general) {
            if (!walk_matrix(c.G).controllable) {
                ++rep.divisibility_skipped;
                continue;
            }
            ++rep.divisibility_checked;
            if (!verify_level_divisibility(c)) ++rep.divisibility_violations;
        }
        rep.records.push_back(std::move(o.record));
    }
    return rep;
}

inline nlohmann::json mate_scan_json(const MateScanReport& r) {
    nlohmann::json certs = nlohmann::json::array();
    for (const auto& [t, c] : r.certificates) {
        auto j = certificate_to_json(c);
        j["trial"] = t;
        certs.push_back(std::move(j));
    }
    return nlohmann::json{{"n", r.n},
                          {"level", r.level},
                          {"p", r.p.to_string()},
                          {"trials", r.trials},
                          {"with_mate", r.with_mate},
                          {"with_generalized_mate", r.with_generalized_mate},
                          {"frequency", r.frequency().get_str()},
                          {"reverify_failures", r.reverify_failures},
                          {"divisibility_checked", r.divisibility_checked},
                          {"divisibility_violations", r.divisibility_violations},
                          {"divisibility_skipped_uncontrollable", r.divisibility_skipped},
                          {"certificates", std::move(certs)}};
}

inline std::string mate_scan_csv(const MateScanReport& r) {
    std::ostringstream os;
    os << "trial,graph6,mate_found,generalized_mate_found\n";
    for (const auto& rec : r.records)
        os << rec.trial_index << ',' << rec.graph6 << ',' << (*rec.mate_found ? 1 : 0) << ','
           << (*rec.generalized_mate_found ? 1 : 0) << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Bounds table

struct BoundsRow {
    std::size_t n = 0;
    std::int64_t level = 1;
    Rational p_hat;
    EpsilonReport eps;
    std::optional<std::size_t> n_star;
    Integer count_bound;
};

inline std::vector<BoundsRow> run_bounds(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto n_star = epsilon_threshold(cfg.level, cfg.p);
    std::vector<BoundsRow> rows;
    for (std::size_t n = std::max<std::size_t>(cfg.n_min, 1); n <= cfg.n_max; ++n) {
        BoundsRow r;
        r.n = n;
        r.level = cfg.level;
        r.p_hat = cfg.p.hat();
        r.eps = epsilon_series(n, cfg.level, cfg.p);
        r.n_star = n_star;
        r.count_bound = count_bound(n, static_cast<unsigned long>(cfg.level));
        rows.push_back(std::move(r));
    }
    return rows;
}

/// epsilon_n and series_bound are upward-rounded decimals with 12 significant digits.
inline std::string bounds_csv(const std::vector<BoundsRow>& rows) {
    std::ostringstream os;
    os << "n,level,p_hat,epsilon_n,series_bound,vacuous_flag,n_star,count_bound_bits\n";
    for (const auto& r : rows) {
        os << r.n << ',' << r.level << ',' << r.p_hat.get_str() << ',' << r.eps.epsilon.to_string(12) << ','
           << (r.eps.series_bound ? r.eps.series_bound->to_string(12) : std::string("divergent")) << ','
           << (r.eps.below_one ? 0 : 1) << ',' << (r.n_star ? std::to_string(*r.n_star) : std::string("none")) << ','
           << mpz_sizeinbase(r.count_bound.get_mpz_t(), 2) << '\n';
    }
    return os.str();
}

} // namespace cospec
