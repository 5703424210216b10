#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "bahc/error.hpp"
#include "bahc/hierarchy.hpp"
#include "bahc/hyper.hpp"
#include "bahc/measures.hpp"
#include "bahc/rng.hpp"
#include "bahc/scatter.hpp"
#include "bahc/sym_matrix.hpp"

namespace bahc {

enum class StopRule { Full, Auto };

// Maxima within this absolute tolerance count as tied; exact float equality
// would never trigger the documented random tie-breaking.
inline constexpr double kTieTolerance = 1e-12;

namespace detail {

using SimFn = std::function<double(const IndexSet&, const IndexSet&)>;

// Greedy max-similarity merging. Entries for untouched cluster pairs are
// carried over between steps; only rows involving the merged cluster are
// re-evaluated (the measures depend only on the two clusters and the
// scatter, so this is identical to full recomputation). A similarity of
// -infinity marks a skipped pair; it is never selected for merging.
inline Hierarchy greedy_ahc(int d, const SimFn& sim, bool bayesian, StopRule stop,
                            std::uint64_t seed) {
    Hierarchy h;
    h.d = d;
    h.bayesian = bayesian;
    Rng rng(seed);

    std::vector<IndexSet> clusters;
    clusters.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) clusters.push_back(IndexSet::single(i));

    std::vector<std::vector<double>> s(static_cast<std::size_t>(d),
                                       std::vector<double>(static_cast<std::size_t>(d), 0.0));
    for (std::size_t a = 0; a < clusters.size(); ++a)
        for (std::size_t b = a + 1; b < clusters.size(); ++b)
            s[a][b] = s[b][a] = sim(clusters[a], clusters[b]);

    double cum = 0.0;
    for (int step = 1; clusters.size() > 1; ++step) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < clusters.size(); ++a)
            for (std::size_t b = a + 1; b < clusters.size(); ++b) best = std::max(best, s[a][b]);

        if (std::isinf(best)) {
            if (stop == StopRule::Auto) {
                h.stopped_early = true;
                h.stop_level = step - 1;
                return h;
            }
            throw MeasureEvaluationError("similarity", "all remaining pairs", "",
                                         "every pair evaluation was skipped as degenerate");
        }

        std::vector<std::pair<std::size_t, std::size_t>> ties;
        for (std::size_t a = 0; a < clusters.size(); ++a)
            for (std::size_t b = a + 1; b < clusters.size(); ++b)
                if (s[a][b] >= best - kTieTolerance) ties.emplace_back(a, b);

        if (stop == StopRule::Auto && best < 0.0) {
            h.stopped_early = true;
            h.stop_level = step - 1;
            SymMatrix rem(static_cast<int>(clusters.size()));
            for (std::size_t a = 0; a < clusters.size(); ++a)
                for (std::size_t b = a + 1; b < clusters.size(); ++b)
                    rem.set(static_cast<int>(a), static_cast<int>(b), s[a][b]);
            h.stop_state = StopState{clusters, std::move(rem)};
            return h;
        }

        std::size_t pick = 0;
        if (ties.size() > 1) pick = rng.bounded(ties.size());
        const auto [a, b] = ties[pick];

        const IndexSet merged = clusters[a].union_with(clusters[b]);
        if (bayesian) cum += s[a][b];
        h.steps.push_back(MergeStep{step, clusters[a], clusters[b], s[a][b],
                                    bayesian ? std::optional<double>(cum) : std::nullopt,
                                    static_cast<int>(ties.size())});

        // merged cluster replaces slot a; slot b is dropped
        clusters[a] = merged;
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
        for (auto& row : s) row.erase(row.begin() + static_cast<std::ptrdiff_t>(b));
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(b));
        for (std::size_t k = 0; k < clusters.size(); ++k) {
            if (k == a) continue;
            s[a][k] = s[k][a] = sim(clusters[a], clusters[k]);
        }
    }
    if (stop == StopRule::Auto) h.stop_level = static_cast<int>(h.steps.size());
    return h;
}

}  // namespace detail

// Algorithm driver for the scatter-based measures. No Lance-Williams shortcut
// exists for these measures: every pairwise value is a fresh function of the
// two clusters and the scatter (rows untouched by the latest merge are carried
// over, which provably changes nothing). Ties at the maximum are broken
// uniformly at random from `seed`.
inline Hierarchy ahc(const ScatterInput& scatter, const SimilaritySpec& spec, StopRule stop,
                     std::uint64_t seed) {
    spec.validate();
    if (is_linkage(spec.measure))
        throw ConfigurationError("ahc: linkage measures are driven by ahc_linkage");

    const bool plug_in = spec.measure == Measure::Bic || spec.measure == Measure::Infomut ||
                         spec.measure == Measure::InfomutNorm;
    if (plug_in && scatter.n_eff() < scatter.dim())
        throw SmallSampleError("ahc: measure " + measure_name(spec.measure) + " needs n_eff >= D (" +
                               std::to_string(scatter.n_eff()) + " < " +
                               std::to_string(scatter.dim()) + ")");

    int skipped = 0;
    auto wrap = [&](auto&& f) {
        return [&, f](const IndexSet& i, const IndexSet& j) -> double {
            try {
                return f(i, j);
            } catch (const NotPositiveDefiniteError& e) {
                if (plug_in)
                    throw SmallSampleError("ahc: singular restriction for " +
                                           measure_name(spec.measure) + " on pair " + i.to_string() +
                                           " | " + j.to_string() + ": " + e.what());
                throw MeasureEvaluationError(measure_name(spec.measure), i.to_string(),
                                             j.to_string(), e.what());
            } catch (const Error& e) {
                throw MeasureEvaluationError(measure_name(spec.measure), i.to_string(),
                                             j.to_string(), e.what());
            }
        };
    };

    detail::SimFn sim;
    switch (spec.measure) {
        case Measure::BayesCov:
        case Measure::BayesCorr:
            sim = wrap([&](const IndexSet& i, const IndexSet& j) {
                return bayes_similarity(scatter, i, j, *spec.hyper).value;
            });
            break;
        case Measure::BayesPrec:
            sim = wrap([&](const IndexSet& i, const IndexSet& j) {
                return precision_similarity(scatter, i, j, *spec.hyper).value;
            });
            break;
        case Measure::Bic:
            sim = wrap([&](const IndexSet& i, const IndexSet& j) {
                return bic_similarity(scatter, i, j).value;
            });
            break;
        case Measure::Infomut:
            sim = wrap([&](const IndexSet& i, const IndexSet& j) {
                return mutual_info_plugin(scatter, i, j);
            });
            break;
        case Measure::InfomutNorm:
            // a degenerate normalizer disqualifies the pair, not the run
            sim = wrap([&](const IndexSet& i, const IndexSet& j) {
                try {
                    return normalized_mutual_info(scatter, i, j);
                } catch (const DegenerateNormalizerError&) {
                    ++skipped;
                    return -std::numeric_limits<double>::infinity();
                }
            });
            break;
        default:
            throw ConfigurationError("ahc: unsupported measure");
    }
    Hierarchy h = detail::greedy_ahc(scatter.dim(), sim, is_bayesian(spec.measure), stop, seed);
    h.degenerate_pairs_skipped = skipped;
    return h;
}

// Linkage baselines on d = 1 - (|r| or r), updated with the Lance-Williams
// recurrences (Ward uses unit leaf masses). Always builds the full hierarchy.
inline Hierarchy ahc_linkage(const SymMatrix& corr, const SimilaritySpec& spec,
                             std::uint64_t seed) {
    spec.validate();
    if (!is_linkage(spec.measure))
        throw ConfigurationError("ahc_linkage: spec must name a linkage measure");
    const int d = corr.dim();
    for (int i = 0; i < d; ++i)
        if (std::abs(corr(i, i) - 1.0) > 1e-9)
            throw InvalidArgumentError("ahc_linkage: correlation matrix must have unit diagonal");

    Hierarchy h;
    h.d = d;
    h.bayesian = false;
    Rng rng(seed);

    std::vector<IndexSet> clusters;
    std::vector<double> sizes;
    for (int i = 0; i < d; ++i) {
        clusters.push_back(IndexSet::single(i));
        sizes.push_back(1.0);
    }
    std::vector<std::vector<double>> dist(static_cast<std::size_t>(d),
                                          std::vector<double>(static_cast<std::size_t>(d), 0.0));
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) {
            const double r = spec.use_abs ? std::abs(corr(a, b)) : corr(a, b);
            dist[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                dist[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1.0 - r;
        }

    for (int step = 1; clusters.size() > 1; ++step) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < clusters.size(); ++a)
            for (std::size_t b = a + 1; b < clusters.size(); ++b) best = std::min(best, dist[a][b]);
        std::vector<std::pair<std::size_t, std::size_t>> ties;
        for (std::size_t a = 0; a < clusters.size(); ++a)
            for (std::size_t b = a + 1; b < clusters.size(); ++b)
                if (dist[a][b] <= best + kTieTolerance) ties.emplace_back(a, b);
        std::size_t pick = 0;
        if (ties.size() > 1) pick = rng.bounded(ties.size());
        const auto [a, b] = ties[pick];
        const double dab = dist[a][b];

        h.steps.push_back(MergeStep{step, clusters[a], clusters[b], 1.0 - dab, std::nullopt,
                                    static_cast<int>(ties.size())});

        const double na = sizes[a], nb = sizes[b];
        for (std::size_t k = 0; k < clusters.size(); ++k) {
            if (k == a || k == b) continue;
            const double dak = dist[a][k], dbk = dist[b][k];
            double dn = 0.0;
            switch (spec.measure) {
                case Measure::LinkSingle: dn = std::min(dak, dbk); break;
                case Measure::LinkComplete: dn = std::max(dak, dbk); break;
                case Measure::LinkAverage: dn = (na * dak + nb * dbk) / (na + nb); break;
                case Measure::LinkWard: {
                    const double nk = sizes[k];
                    dn = ((na + nk) * dak + (nb + nk) * dbk - nk * dab) / (na + nb + nk);
                    break;
                }
                default: break;
            }
            dist[a][k] = dist[k][a] = dn;
        }
        clusters[a] = clusters[a].union_with(clusters[b]);
        sizes[a] = na + nb;
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
        sizes.erase(sizes.begin() + static_cast<std::ptrdiff_t>(b));
        for (auto& row : dist) row.erase(row.begin() + static_cast<std::ptrdiff_t>(b));
        dist.erase(dist.begin() + static_cast<std::ptrdiff_t>(b));
    }
    return h;
}

}  // namespace bahc
