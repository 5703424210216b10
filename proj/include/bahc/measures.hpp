#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bahc/error.hpp"
#include "bahc/gamma.hpp"
#include "bahc/hyper.hpp"
#include "bahc/partition.hpp"
#include "bahc/scatter.hpp"
#include "bahc/sym_matrix.hpp"

namespace bahc {

// phi(n, A) = -(n/2) ln|A| + sum_{d=1..dim(A)} lnGamma((n+1-d)/2).
inline double phi(double n, const SymMatrix& a) {
    const int d = a.dim();
    if (!(n + 1.0 - d > 0.0))
        throw InvalidDegreesOfFreedomError("phi: need n + 1 - dim > 0, got n = " + std::to_string(n) +
                                           ", dim = " + std::to_string(d));
    double g = 0.0;
    for (int k = 1; k <= d; ++k) g += log_gamma((n + 1.0 - k) / 2.0);
    return -(n / 2.0) * log_det_pd(a) + g;
}

struct SimilarityDecomposition {
    double dphi_union;
    double dphi_i;
    double dphi_j;
};

struct SimilarityValue {
    double value;
    std::optional<SimilarityDecomposition> decomposition;
};

namespace detail {

inline void check_pair(const ScatterInput& scatter, const IndexSet& i, const IndexSet& j) {
    if (!i.disjoint_with(j))
        throw InvalidArgumentError("similarity: cluster index sets overlap: " + i.to_string() +
                                   " and " + j.to_string());
    if (i.max_index() >= scatter.dim() || j.max_index() >= scatter.dim())
        throw InvalidArgumentError("similarity: cluster index out of range");
}

// Delta phi_k = phi(n_eff + nu_k, Lambda_k + S_k) - phi(nu_k, Lambda_k).
inline double delta_phi(const ScatterInput& scatter, const IndexSet& k, const Hyperparams& hyper) {
    const double nu_k = hyper.nu_for(k.size());
    const SymMatrix lam_k = hyper.lambda_restricted(k);
    const SymMatrix post = lam_k.plus(restrict(scatter.s, k));
    return phi(scatter.n_eff() + nu_k, post) - phi(nu_k, lam_k);
}

}  // namespace detail

// Log Bayes factor of dependence against independence,
// s = Delta phi_{i u j} - Delta phi_i - Delta phi_j.
// Finite for any n_eff >= 1, including rank-deficient S.
inline SimilarityValue bayes_similarity(const ScatterInput& scatter, const IndexSet& i,
                                        const IndexSet& j, const Hyperparams& hyper) {
    detail::check_pair(scatter, i, j);
    hyper.validate();
    if (hyper.dim() != scatter.dim())
        throw ConfigurationError("bayes_similarity: hyperparameter dimension does not match scatter");
    if (hyper.variant == HyperVariant::Precision)
        throw ConfigurationError("bayes_similarity: precision hyperparameters belong to precision_similarity");
    if (hyper.variant == HyperVariant::Corr && scatter.kind != ScatterKind::CorrelationScale)
        throw ConfigurationError("bayes_similarity: correlation variant requires correlation-scale scatter");

    const IndexSet u = i.union_with(j);
    const double du = detail::delta_phi(scatter, u, hyper);
    const double di = detail::delta_phi(scatter, i, hyper);
    const double dj = detail::delta_phi(scatter, j, hyper);
    return SimilarityValue{du - di - dj, SimilarityDecomposition{du, di, dj}};
}

// Plug-in Gaussian mutual information, I = (1/2) ln(|S_i||S_j|/|S_{i u j}|)
// on the sample covariance S/n_eff.
inline double mutual_info_plugin(const ScatterInput& scatter, const IndexSet& i, const IndexSet& j) {
    detail::check_pair(scatter, i, j);
    const SymMatrix shat = scatter.sample_cov();
    const IndexSet u = i.union_with(j);
    return 0.5 * (log_det_pd(restrict(shat, i)) + log_det_pd(restrict(shat, j)) -
                  log_det_pd(restrict(shat, u)));
}

// Large-N asymptote of the log Bayes factor: N*I - (D_i D_j / 2) ln N with
// N = n_eff. Needs the plug-in restrictions to be positive definite.
inline SimilarityValue bic_similarity(const ScatterInput& scatter, const IndexSet& i,
                                      const IndexSet& j) {
    const double n = static_cast<double>(scatter.n_eff());
    const double info = mutual_info_plugin(scatter, i, j);
    const double penalty = (static_cast<double>(i.size()) * j.size() / 2.0) * std::log(n);
    return SimilarityValue{n * info - penalty, std::nullopt};
}

// Mutual information divided by the joint differential entropy of the
// standardized pair, h = (1/2) ln[(2 pi e)^{D_u} |R_u|].
inline double normalized_mutual_info(const ScatterInput& scatter, const IndexSet& i,
                                     const IndexSet& j) {
    detail::check_pair(scatter, i, j);
    const double info = mutual_info_plugin(scatter, i, j);
    const IndexSet u = i.union_with(j);
    const SymMatrix r_u = cov_to_corr(restrict(scatter.sample_cov(), u));
    const double h =
        0.5 * (u.size() * std::log(2.0 * std::numbers::pi * std::numbers::e) + log_det_pd(r_u));
    if (!(h > 0.0))
        throw DegenerateNormalizerError("normalized_mutual_info: joint entropy normalizer is not positive");
    return info / h;
}

// Log Bayes factor computed on the concentration matrix (Wishart prior with
// scale Omega = omega_scale * Lambda^{-1}). The prior degrees of freedom for
// the blocks stay nu_{i u j}; Wishart marginals do not reduce them.
inline SimilarityValue precision_similarity(const ScatterInput& scatter, const IndexSet& i,
                                            const IndexSet& j, const Hyperparams& hyper) {
    detail::check_pair(scatter, i, j);
    hyper.validate();
    if (hyper.dim() != scatter.dim())
        throw ConfigurationError("precision_similarity: hyperparameter dimension does not match scatter");
    if (hyper.variant != HyperVariant::Precision)
        throw ConfigurationError("precision_similarity: requires precision-variant hyperparameters");

    const IndexSet u = i.union_with(j);
    const double nu_u = hyper.nu_for(u.size());
    const double n = static_cast<double>(scatter.n_eff());
    auto term = [&](const IndexSet& k) {
        // Omega_k^{-1} = Lambda_k / omega_scale; ln|Omega_k| = sum ln(omega_scale / lambda_d)
        std::vector<double> om_inv(static_cast<std::size_t>(k.size()));
        double ld_om = 0.0;
        for (int t = 0; t < k.size(); ++t) {
            const double lam = hyper.lambda_diag[static_cast<std::size_t>(k[t])];
            om_inv[static_cast<std::size_t>(t)] = lam / hyper.omega_scale;
            ld_om += std::log(hyper.omega_scale / lam);
        }
        const SymMatrix shifted = SymMatrix::diagonal(om_inv).plus(restrict(scatter.s, k));
        return log_wishart_z(k.size(), n + nu_u) - log_wishart_z(k.size(), nu_u) -
               ((n + nu_u) / 2.0) * log_det_pd(shifted) - (nu_u / 2.0) * ld_om;
    };
    const double s = term(u) - term(i) - term(j);
    return SimilarityValue{s, std::nullopt};
}

// Relative log marginal likelihood of a partition:
// sum_k [ ln Z(D_k, n+nu_k) - ln Z(D_k, nu_k) + (nu_k/2) ln|Lambda_k|
//         - ((n+nu_k)/2) ln|Lambda_k + S_k| ].
// The partition-independent factor |S|^{(N-D-1)/2} / Z(D,N) is dropped; it
// cancels in every comparison and is undefined for N < D.
inline double partition_log_marginal(const ScatterInput& scatter, const Partition& p,
                                     const Hyperparams& hyper) {
    hyper.validate();
    if (p.d() != scatter.dim())
        throw InvalidArgumentError("partition_log_marginal: partition dimension mismatch");
    if (hyper.dim() != scatter.dim())
        throw ConfigurationError("partition_log_marginal: hyperparameter dimension mismatch");
    const double n = static_cast<double>(scatter.n_eff());
    double out = 0.0;
    for (const IndexSet& k : p.blocks()) {
        const double nu_k = hyper.nu_for(k.size());
        const SymMatrix lam_k = hyper.lambda_restricted(k);
        const SymMatrix post = lam_k.plus(restrict(scatter.s, k));
        out += log_wishart_z(k.size(), n + nu_k) - log_wishart_z(k.size(), nu_k) +
               (nu_k / 2.0) * log_det_pd(lam_k) - ((n + nu_k) / 2.0) * log_det_pd(post);
    }
    return out;
}

enum class Measure {
    BayesCov,
    BayesCorr,
    Bic,
    BayesPrec,
    Infomut,
    InfomutNorm,
    LinkSingle,
    LinkAverage,
    LinkComplete,
    LinkWard,
};

inline bool is_linkage(Measure m) {
    return m == Measure::LinkSingle || m == Measure::LinkAverage || m == Measure::LinkComplete ||
           m == Measure::LinkWard;
}

inline bool is_bayesian(Measure m) {
    return m == Measure::BayesCov || m == Measure::BayesCorr || m == Measure::Bic ||
           m == Measure::BayesPrec;
}

inline bool needs_hyper(Measure m) {
    return m == Measure::BayesCov || m == Measure::BayesCorr || m == Measure::BayesPrec;
}

inline std::string measure_name(Measure m) {
    switch (m) {
        case Measure::BayesCov: return "bayescov";
        case Measure::BayesCorr: return "bayescorr";
        case Measure::Bic: return "bic";
        case Measure::BayesPrec: return "bayesprec";
        case Measure::Infomut: return "infomut";
        case Measure::InfomutNorm: return "infomutnorm";
        case Measure::LinkSingle: return "single";
        case Measure::LinkAverage: return "average";
        case Measure::LinkComplete: return "complete";
        case Measure::LinkWard: return "ward";
    }
    return "?";
}

struct SimilaritySpec {
    Measure measure;
    bool use_abs = false;
    std::optional<Hyperparams> hyper;

    void validate() const {
        if (needs_hyper(measure) != hyper.has_value())
            throw ConfigurationError("SimilaritySpec: hyperparameters " +
                                     std::string(needs_hyper(measure) ? "required" : "not accepted") +
                                     " for measure " + measure_name(measure));
        if (use_abs && !is_linkage(measure))
            throw ConfigurationError("SimilaritySpec: use_abs applies to linkage measures only");
        if (hyper) hyper->validate();
    }
};

// Cross-cluster linkage similarity on a unit-diagonal correlation matrix:
// single = max, complete = min, average = mean over (|r| or r). Ward is
// defined pairwise only for singleton clusters; larger Ward clusters are the
// clustering engine's job (Lance-Williams updates).
inline double linkage_similarity(const SymMatrix& corr, const IndexSet& i, const IndexSet& j,
                                 const SimilaritySpec& spec) {
    if (!is_linkage(spec.measure))
        throw ConfigurationError("linkage_similarity: spec must name a linkage measure");
    if (!i.disjoint_with(j))
        throw InvalidArgumentError("linkage_similarity: cluster index sets overlap");
    if (i.max_index() >= corr.dim() || j.max_index() >= corr.dim())
        throw InvalidArgumentError("linkage_similarity: cluster index out of range");
    if (spec.measure == Measure::LinkWard && (i.size() > 1 || j.size() > 1))
        throw InvalidArgumentError(
            "linkage_similarity: Ward similarity between non-singleton clusters is defined by the "
            "Lance-Williams recursion, not pairwise");

    double best_max = -2.0, best_min = 2.0, sum = 0.0;
    for (int a = 0; a < i.size(); ++a)
        for (int b = 0; b < j.size(); ++b) {
            double r = corr(i[a], j[b]);
            if (spec.use_abs) r = std::abs(r);
            best_max = std::max(best_max, r);
            best_min = std::min(best_min, r);
            sum += r;
        }
    switch (spec.measure) {
        case Measure::LinkSingle: return best_max;
        case Measure::LinkComplete: return best_min;
        case Measure::LinkAverage: return sum / (static_cast<double>(i.size()) * j.size());
        case Measure::LinkWard: return best_max;  // singleton pair, all three coincide
        default: return 0.0;  // unreachable
    }
}

}  // namespace bahc
