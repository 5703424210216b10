#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "bahc/error.hpp"
#include "bahc/sym_matrix.hpp"

namespace bahc {

enum class ScatterKind { CovarianceScale, CorrelationScale };

// Sum-of-squares matrix S with its sample count. The effective degrees of
// freedom are N when the mean is known and N - 1 otherwise; every formula
// downstream consumes n_eff, so the substitution lives here only.
struct ScatterInput {
    SymMatrix s;
    int n_samples;
    bool mean_known;
    ScatterKind kind;

    ScatterInput(SymMatrix s_, int n_samples_, bool mean_known_, ScatterKind kind_)
        : s(std::move(s_)), n_samples(n_samples_), mean_known(mean_known_), kind(kind_) {
        if (n_samples < 1) throw InvalidArgumentError("ScatterInput: n_samples must be >= 1");
        if (n_eff() < 1) throw InvalidArgumentError("ScatterInput: need n >= 2 when the mean is unknown");
        if (kind == ScatterKind::CorrelationScale) {
            const double ne = static_cast<double>(n_eff());
            for (int i = 0; i < s.dim(); ++i)
                if (std::abs(s(i, i) / ne - 1.0) > 1e-12)
                    throw InvalidArgumentError(
                        "ScatterInput: correlation-scale scatter must equal n_eff * R with unit diagonal");
        }
    }

    int dim() const { return s.dim(); }
    int n_eff() const { return mean_known ? n_samples : n_samples - 1; }

    // S / n_eff, the plug-in covariance (or correlation) estimate.
    SymMatrix sample_cov() const { return s.scaled(1.0 / n_eff()); }

    static ScatterInput from_covariance(const SymMatrix& cov, int n_samples, bool mean_known) {
        const int ne = mean_known ? n_samples : n_samples - 1;
        if (ne < 1) throw InvalidArgumentError("from_covariance: need n_eff >= 1");
        return ScatterInput(cov.scaled(static_cast<double>(ne)), n_samples, mean_known,
                            ScatterKind::CovarianceScale);
    }

    static ScatterInput from_correlation(const SymMatrix& corr, int n_samples, bool mean_known) {
        const int ne = mean_known ? n_samples : n_samples - 1;
        if (ne < 1) throw InvalidArgumentError("from_correlation: need n_eff >= 1");
        return ScatterInput(corr.scaled(static_cast<double>(ne)), n_samples, mean_known,
                            ScatterKind::CorrelationScale);
    }

    // Same data on correlation scale: S' = n_eff * corr(S / n_eff).
    ScatterInput to_correlation_scale() const {
        if (kind == ScatterKind::CorrelationScale) return *this;
        return from_correlation(cov_to_corr(s), n_samples, mean_known);
    }
};

// S = sum_n (x_n - c)(x_n - c)^t with c either the supplied known mean or the
// sample mean. Result is on covariance scale.
inline ScatterInput scatter_from_data(const std::vector<std::vector<double>>& rows,
                                      bool mean_known,
                                      const std::optional<std::vector<double>>& mu = std::nullopt) {
    if (rows.empty()) throw InvalidArgumentError("scatter_from_data: no observations");
    const std::size_t d = rows.front().size();
    if (d == 0) throw InvalidArgumentError("scatter_from_data: zero-dimensional observations");
    for (const auto& r : rows)
        if (r.size() != d) throw InvalidArgumentError("scatter_from_data: ragged rows");
    if (mean_known && !mu)
        throw InvalidArgumentError("scatter_from_data: mean_known requires mu");
    if (!mean_known && rows.size() < 2)
        throw InvalidArgumentError("scatter_from_data: need at least 2 observations when the mean is unknown");
    if (mu && mu->size() != d)
        throw InvalidArgumentError("scatter_from_data: mu dimension mismatch");

    std::vector<double> center(d, 0.0);
    if (mean_known) {
        center = *mu;
    } else {
        for (const auto& r : rows)
            for (std::size_t j = 0; j < d; ++j) center[j] += r[j];
        for (double& c : center) c /= static_cast<double>(rows.size());
    }

    SymMatrix s(static_cast<int>(d));
    for (const auto& r : rows)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                s.add(static_cast<int>(i), static_cast<int>(j),
                      (r[i] - center[i]) * (r[j] - center[j]));
    return ScatterInput(std::move(s), static_cast<int>(rows.size()), mean_known,
                        ScatterKind::CovarianceScale);
}

}  // namespace bahc
