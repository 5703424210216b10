#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bahc/ahc.hpp"
#include "bahc/error.hpp"
#include "bahc/hyper.hpp"
#include "bahc/metrics.hpp"
#include "bahc/rng.hpp"
#include "bahc/scatter.hpp"
#include "bahc/simgen.hpp"

namespace bahc {

// A clustering method as named in a benchmark config, e.g. "bayescorr",
// "bicauto", "averageabs".
struct MethodSpec {
    std::string name;
    Measure measure;
    bool use_abs = false;
    bool auto_stop = false;
};

inline MethodSpec parse_method(const std::string& name) {
    std::string base = name;
    MethodSpec m;
    m.name = name;
    auto strip_suffix = [&](const std::string& suf) {
        if (base.size() > suf.size() && base.compare(base.size() - suf.size(), suf.size(), suf) == 0) {
            base = base.substr(0, base.size() - suf.size());
            return true;
        }
        return false;
    };
    m.auto_stop = strip_suffix("auto");
    m.use_abs = strip_suffix("abs");

    if (base == "bayescov") m.measure = Measure::BayesCov;
    else if (base == "bayescorr") m.measure = Measure::BayesCorr;
    else if (base == "bic") m.measure = Measure::Bic;
    else if (base == "bayesprec") m.measure = Measure::BayesPrec;
    else if (base == "infomut") m.measure = Measure::Infomut;
    else if (base == "infomutnorm") m.measure = Measure::InfomutNorm;
    else if (base == "single") m.measure = Measure::LinkSingle;
    else if (base == "average") m.measure = Measure::LinkAverage;
    else if (base == "complete") m.measure = Measure::LinkComplete;
    else if (base == "ward") m.measure = Measure::LinkWard;
    else throw InvalidArgumentError("unknown method name: " + name);

    if (m.use_abs && !is_linkage(m.measure))
        throw InvalidArgumentError("method " + name + ": abs applies to linkage measures only");
    if (m.auto_stop && !is_bayesian(m.measure))
        throw InvalidArgumentError("method " + name + ": the automatic stopping rule needs a log Bayes factor");
    return m;
}

struct SimConfig {
    int d = 6;
    std::vector<int> c_values;
    std::vector<int> n_values;
    std::vector<Distribution> distributions;
    int replications = 0;
    std::vector<MethodSpec> methods;
    std::uint64_t master_seed = 0;

    void validate() const {
        if (d < 1) throw InvalidArgumentError("SimConfig: d must be >= 1");
        for (int c : c_values)
            if (c < 1 || c > d) throw InvalidArgumentError("SimConfig: cluster counts must satisfy 1 <= c <= d");
        for (int n : n_values)
            if (n < 2) throw InvalidArgumentError("SimConfig: sample sizes must be >= 2");
        if (replications < 0) throw InvalidArgumentError("SimConfig: replications must be >= 0");
    }
};

// Built-in grids. Desk scale keeps a laptop run in the minutes range; the
// full grid reproduces the complete simulation protocol and takes hours.
inline SimConfig desk_scale_config(int d = 6, std::uint64_t master_seed = 1) {
    SimConfig cfg;
    cfg.d = d;
    cfg.c_values = {2, 3, 4};
    cfg.n_values = {10, 90, 170};
    cfg.distributions = {Distribution::gaussian(), Distribution::student(3)};
    cfg.replications = 100;
    for (const char* name : {"bayescov", "bayescorr", "bic", "bayesprec", "infomut", "infomutnorm",
                             "single", "average", "complete", "ward", "singleabs", "averageabs",
                             "completeabs", "wardabs", "bayescovauto", "bayescorrauto", "bicauto"})
        cfg.methods.push_back(parse_method(name));
    cfg.master_seed = master_seed;
    cfg.validate();
    return cfg;
}

inline SimConfig full_grid_config(int d, std::uint64_t master_seed = 1) {
    SimConfig cfg = desk_scale_config(d, master_seed);
    cfg.c_values.clear();
    for (int c = 1; c <= d; ++c) cfg.c_values.push_back(c);
    cfg.n_values = {10, 50, 90, 130, 170, 210, 250, 290};
    cfg.distributions = {Distribution::gaussian(), Distribution::student(1),
                         Distribution::student(3), Distribution::student(5)};
    cfg.replications = 500;
    cfg.validate();
    return cfg;
}

struct SimResult {
    int d = 0;
    int c = 0;
    int n = 0;
    std::string distribution;
    std::string method;
    int replication = 0;
    bool ok = false;
    double adjusted_rand = 0.0;
    double rand = 0.0;
    bool exact = false;
    std::optional<int> auto_k;
    std::chrono::microseconds wall_time{0};
    std::string error;
};

namespace detail {

inline int benchmark_threads() {
    if (const char* env = std::getenv("BAHC_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Runs one method on one dataset; partition scored against the truth.
inline void run_method(const MethodSpec& m, const ScatterInput& scatter_corr,
                       const SymMatrix& corr, const Partition& truth, int true_c,
                       std::uint64_t seed, SimResult& row) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        Partition got = Partition::singletons(truth.d());
        if (is_linkage(m.measure)) {
            SimilaritySpec spec{m.measure, m.use_abs, std::nullopt};
            got = cut(ahc_linkage(corr, spec, seed), true_c);
        } else {
            std::optional<Hyperparams> hyper;
            if (m.measure == Measure::BayesCov) hyper = bayes_cov_hyper(scatter_corr);
            else if (m.measure == Measure::BayesCorr) hyper = bayes_corr_hyper(scatter_corr.dim());
            else if (m.measure == Measure::BayesPrec) hyper = bayes_precision_hyper(scatter_corr);
            SimilaritySpec spec{m.measure, false, hyper};
            const Hierarchy h =
                ahc(scatter_corr, spec, m.auto_stop ? StopRule::Auto : StopRule::Full, seed);
            if (m.auto_stop) {
                got = auto_partition(h);
                row.auto_k = got.num_blocks();
            } else {
                got = cut(h, true_c);
            }
        }
        row.adjusted_rand = adjusted_rand(got, truth);
        row.rand = rand_index(got, truth);
        row.exact = exact_recovery(got, truth);
        row.ok = true;
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
    }
    row.wall_time =
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0);
}

}  // namespace detail

// Full protocol: draw a partition and per-block random correlations, sample
// data, summarize by the sample correlation matrix (mean unknown), run every
// method. Deterministic given master_seed: per-dataset seeds are
// seed_mix(master_seed, {c, n, fnv1a(dist), rep}) and each method mixes in
// fnv1a of its own name, so results do not depend on scheduling or method
// order. Rows come back in canonical order (c, n, distribution, replication,
// method).
inline std::vector<SimResult> run_benchmark(const SimConfig& cfg) {
    cfg.validate();
    struct Cell {
        int c;
        int n;
        Distribution dist;
        int rep;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    std::set<std::uint64_t> seeds_seen;
    for (int c : cfg.c_values)
        for (int n : cfg.n_values)
            for (const auto& dist : cfg.distributions)
                for (int rep = 0; rep < cfg.replications; ++rep) {
                    const std::uint64_t seed =
                        seed_mix(cfg.master_seed, {static_cast<std::uint64_t>(c),
                                                   static_cast<std::uint64_t>(n),
                                                   fnv1a64(dist.name()),
                                                   static_cast<std::uint64_t>(rep)});
                    if (!seeds_seen.insert(seed).second)
                        throw std::logic_error("run_benchmark: derived dataset seeds collide");
                    cells.push_back({c, n, dist, rep, seed});
                }

    const std::size_t n_methods = cfg.methods.size();
    std::vector<SimResult> results(cells.size() * n_methods);

    auto work = [&](std::size_t ci) {
        const Cell& cell = cells[ci];
        Rng rng(cell.seed);
        SimResult proto;
        proto.d = cfg.d;
        proto.c = cell.c;
        proto.n = cell.n;
        proto.distribution = cell.dist.name();
        proto.replication = cell.rep;

        std::optional<Partition> truth;
        std::optional<ScatterInput> scatter_corr;
        std::optional<SymMatrix> corr;
        std::string gen_error;
        try {
            truth = random_partition(cfg.d, cell.c, rng);
            const auto rows = sample_dataset(*truth, cell.n, cell.dist, rng);
            const ScatterInput scatter = scatter_from_data(rows, /*mean_known=*/false);
            corr = cov_to_corr(scatter.sample_cov());
            scatter_corr = scatter.to_correlation_scale();
        } catch (const std::exception& e) {
            gen_error = e.what();
        }

        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            SimResult& row = results[ci * n_methods + mi];
            row = proto;
            row.method = cfg.methods[mi].name;
            if (!gen_error.empty()) {
                row.ok = false;
                row.error = "data generation failed: " + gen_error;
                continue;
            }
            const std::uint64_t mseed = seed_mix(cell.seed, {fnv1a64(cfg.methods[mi].name)});
            detail::run_method(cfg.methods[mi], *scatter_corr, *corr, *truth, cell.c, mseed, row);
        }
    };

    const int threads = std::min<int>(detail::benchmark_threads(), static_cast<int>(cells.size()) + 1);
    if (threads <= 1 || cells.size() <= 1) {
        for (std::size_t ci = 0; ci < cells.size(); ++ci) work(ci);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t ci = next.fetch_add(1);
                    if (ci >= cells.size()) return;
                    work(ci);
                }
            });
        for (auto& th : pool) th.join();
    }
    return results;
}

// Quantile with linear interpolation between closest ranks (the convention is
// documented in the README; raw rows are emitted so any pooling can be redone).
inline double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw InvalidArgumentError("quantile: empty sample");
    std::sort(v.begin(), v.end());
    const double pos = q * (static_cast<double>(v.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

struct MethodSummary {
    std::string method;
    double median_adj_rand = 0.0;
    double p25_adj_rand = 0.0;
    double p05_adj_rand = 0.0;
    double min_adj_rand = 0.0;
    double exact_proportion = 0.0;
    int failures = 0;
    int runs = 0;
};

// Pooled per-method ladder (median / 25% / 5% / min adjusted Rand, plus the
// exact-recovery proportion), mirroring the ranking indices of the protocol.
inline std::vector<MethodSummary> summarize(const std::vector<SimResult>& results,
                                            const std::vector<MethodSpec>& methods) {
    std::vector<MethodSummary> out;
    for (const auto& m : methods) {
        MethodSummary s;
        s.method = m.name;
        std::vector<double> ari;
        int exact = 0;
        for (const auto& r : results) {
            if (r.method != m.name) continue;
            ++s.runs;
            if (!r.ok) {
                ++s.failures;
                continue;
            }
            ari.push_back(r.adjusted_rand);
            exact += r.exact ? 1 : 0;
        }
        if (!ari.empty()) {
            s.median_adj_rand = quantile(ari, 0.5);
            s.p25_adj_rand = quantile(ari, 0.25);
            s.p05_adj_rand = quantile(ari, 0.05);
            s.min_adj_rand = *std::min_element(ari.begin(), ari.end());
            s.exact_proportion = static_cast<double>(exact) / static_cast<double>(ari.size());
        }
        out.push_back(std::move(s));
    }
    return out;
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace detail

// One SimResult per row. Wall times are withheld by default so identical
// seeds produce byte-identical files; pass include_timings for profiling.
inline std::string results_to_csv(const std::vector<SimResult>& results,
                                  bool include_timings = false) {
    std::string out = "d,c,n,distribution,method,replication,adjusted_rand,rand,exact,auto_k,error";
    if (include_timings) out += ",wall_time_us";
    out += "\n";
    for (const auto& r : results) {
        out += std::to_string(r.d) + "," + std::to_string(r.c) + "," + std::to_string(r.n) + "," +
               r.distribution + "," + r.method + "," + std::to_string(r.replication) + ",";
        if (r.ok) {
            out += detail::fmt_double(r.adjusted_rand) + "," + detail::fmt_double(r.rand) + "," +
                   (r.exact ? "1" : "0") + ",";
            if (r.auto_k) out += std::to_string(*r.auto_k);
            out += ",";
        } else {
            std::string msg = r.error;
            for (char& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            out += ",,,," + msg;
        }
        if (include_timings) out += "," + std::to_string(r.wall_time.count());
        out += "\n";
    }
    return out;
}

inline std::string summary_to_csv(const std::vector<MethodSummary>& summaries) {
    std::string out =
        "method,median_adj_rand,p25_adj_rand,p05_adj_rand,min_adj_rand,exact_proportion,failures,runs\n";
    for (const auto& s : summaries) {
        out += s.method + "," + detail::fmt_double(s.median_adj_rand) + "," +
               detail::fmt_double(s.p25_adj_rand) + "," + detail::fmt_double(s.p05_adj_rand) + "," +
               detail::fmt_double(s.min_adj_rand) + "," + detail::fmt_double(s.exact_proportion) +
               "," + std::to_string(s.failures) + "," + std::to_string(s.runs) + "\n";
    }
    return out;
}

}  // namespace bahc
