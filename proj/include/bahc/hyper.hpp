#pragma once

#include <string>
#include <vector>

#include "bahc/error.hpp"
#include "bahc/scatter.hpp"
#include "bahc/sym_matrix.hpp"

namespace bahc {

enum class HyperVariant { Cov, Corr, Precision };

// Inverse-Wishart prior parameters: global degrees of freedom nu and the
// diagonal of the inverse scale matrix Lambda. A cluster of size d_k gets
// nu_k = nu - D + d_k, so values at different hierarchy levels agree.
// The precision variant works with Omega = omega_scale * Lambda^{-1}.
struct Hyperparams {
    double nu;
    std::vector<double> lambda_diag;
    HyperVariant variant;
    double omega_scale = 1.0;

    int dim() const { return static_cast<int>(lambda_diag.size()); }

    double nu_for(int cluster_size) const { return nu - dim() + cluster_size; }

    void validate() const {
        const int d = dim();
        if (d < 1) throw InvalidArgumentError("Hyperparams: empty lambda_diag");
        if (!(nu > d - 1))
            throw InvalidDegreesOfFreedomError("Hyperparams: need nu > D - 1, got nu = " +
                                               std::to_string(nu) + ", D = " + std::to_string(d));
        for (double l : lambda_diag)
            if (!(l > 0.0)) throw InvalidArgumentError("Hyperparams: lambda_diag entries must be positive");
        if (!(omega_scale > 0.0)) throw InvalidArgumentError("Hyperparams: omega_scale must be positive");
    }

    SymMatrix lambda_restricted(const IndexSet& idx) const {
        std::vector<double> diag(static_cast<std::size_t>(idx.size()));
        for (int k = 0; k < idx.size(); ++k)
            diag[static_cast<std::size_t>(k)] = lambda_diag[static_cast<std::size_t>(idx[k])];
        return SymMatrix::diagonal(diag);
    }
};

// nu = D and Lambda_dd = S_dd / n_eff, the value that makes the all-singleton
// marginal likelihood stationary in Lambda.
inline Hyperparams bayes_cov_hyper(const ScatterInput& scatter) {
    const int d = scatter.dim();
    std::vector<double> lambda(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const double sdd = scatter.s(i, i);
        if (!(sdd > 0.0))
            throw DegenerateVarianceError("bayes_cov_hyper: zero diagonal entry at index " +
                                          std::to_string(i));
        lambda[static_cast<std::size_t>(i)] = sdd / scatter.n_eff();
    }
    Hyperparams h{static_cast<double>(d), std::move(lambda), HyperVariant::Cov};
    h.validate();
    return h;
}

// nu = D + 1 and Lambda = I on a correlation-scale scatter; the implied prior
// puts uniform marginals on the correlation coefficients.
inline Hyperparams bayes_corr_hyper(int d) {
    if (d < 1) throw InvalidArgumentError("bayes_corr_hyper: d must be >= 1");
    Hyperparams h{static_cast<double>(d + 1), std::vector<double>(static_cast<std::size_t>(d), 1.0),
                  HyperVariant::Corr};
    h.validate();
    return h;
}

// Precision-matrix variant: Omega = omega_scale * Lambda^{-1} with Lambda
// taken from the covariance strategy.
inline Hyperparams bayes_precision_hyper(const ScatterInput& scatter, double omega_scale = 1.0) {
    Hyperparams h = bayes_cov_hyper(scatter);
    h.variant = HyperVariant::Precision;
    h.omega_scale = omega_scale;
    h.validate();
    return h;
}

}  // namespace bahc
