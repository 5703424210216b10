#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bahc/error.hpp"
#include "bahc/partition.hpp"
#include "bahc/rng.hpp"
#include "bahc/sym_matrix.hpp"

namespace bahc {

// Uniform draw over set partitions of d elements into exactly c non-empty
// blocks, by the Stirling-number recursion S(n,k) = k S(n-1,k) + S(n-1,k-1).
inline Partition random_partition(int d, int c, Rng& rng) {
    if (c < 1 || c > d) throw InvalidArgumentError("random_partition: need 1 <= c <= d");

    std::vector<std::vector<long double>> st(static_cast<std::size_t>(d + 1),
                                             std::vector<long double>(static_cast<std::size_t>(c + 1), 0.0L));
    st[0][0] = 1.0L;
    for (int n = 1; n <= d; ++n)
        for (int k = 1; k <= std::min(n, c); ++k)
            st[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] =
                k * st[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)] +
                st[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)];

    // Peel the last element: either it is a singleton block (S(n-1,k-1) ways)
    // or it joins one of the k blocks of a partition of the rest.
    std::vector<bool> opens_block(static_cast<std::size_t>(d));
    int n = d, k = c;
    while (n > 0) {
        bool open;
        if (n == k) open = true;
        else if (k == 1) open = false;
        else {
            const long double p_new =
                st[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)] /
                st[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
            open = static_cast<long double>(rng.uniform()) < p_new;
        }
        opens_block[static_cast<std::size_t>(n - 1)] = open;
        if (open) --k;
        --n;
    }

    std::vector<std::vector<int>> blocks;
    for (int e = 0; e < d; ++e) {
        if (opens_block[static_cast<std::size_t>(e)])
            blocks.push_back({e});
        else
            blocks[rng.bounded(blocks.size())].push_back(e);
    }
    std::vector<IndexSet> sets;
    sets.reserve(blocks.size());
    for (auto& b : blocks) sets.push_back(IndexSet(std::move(b)));
    return Partition(d, std::move(sets));
}

namespace detail {

// Lower Bartlett factor of a Wishart(dof, I) draw: sqrt-chi-square diagonal,
// standard normal below.
inline std::vector<double> bartlett_lower(int d, int dof, Rng& rng) {
    std::vector<double> a(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) {
        a[static_cast<std::size_t>(i) * d + i] = std::sqrt(rng.chi_square(dof - i));
        for (int j = 0; j < i; ++j) a[static_cast<std::size_t>(i) * d + j] = rng.normal();
    }
    return a;
}

}  // namespace detail

// Sigma ~ inverse-Wishart(dk + 1, I), taken as the inverse of a Bartlett
// Wishart(dk + 1, I) draw and rescaled to a correlation matrix. This is the
// construction whose off-diagonal correlations have Uniform(-1, 1)
// marginals; rescaling the Wishart draw itself only achieves that for
// dk <= 2. Numerically singular draws are rejected and redrawn.
inline SymMatrix random_cluster_correlation(int dk, Rng& rng, int* retries = nullptr) {
    if (dk < 1) throw InvalidArgumentError("random_cluster_correlation: dk must be >= 1");
    if (retries) *retries = 0;
    if (dk == 1) return SymMatrix::identity(1);
    for (;;) {
        const auto a = detail::bartlett_lower(dk, dk + 1, rng);
        // T = A^{-1} by forward substitution, then W^{-1} = T^t T
        std::vector<double> t(static_cast<std::size_t>(dk) * dk, 0.0);
        bool singular = false;
        for (int j = 0; j < dk && !singular; ++j) {
            const double piv = a[static_cast<std::size_t>(j) * dk + j];
            if (!(piv > 1e-150)) {
                singular = true;
                break;
            }
            t[static_cast<std::size_t>(j) * dk + j] = 1.0 / piv;
            for (int i = j + 1; i < dk; ++i) {
                double s = 0.0;
                for (int k = j; k < i; ++k)
                    s += a[static_cast<std::size_t>(i) * dk + k] * t[static_cast<std::size_t>(k) * dk + j];
                t[static_cast<std::size_t>(i) * dk + j] = -s / a[static_cast<std::size_t>(i) * dk + i];
            }
        }
        if (singular) {
            if (retries) ++*retries;
            continue;
        }
        SymMatrix sigma(dk);
        for (int i = 0; i < dk; ++i)
            for (int j = 0; j <= i; ++j) {
                double s = 0.0;
                for (int k = std::max(i, j); k < dk; ++k)
                    s += t[static_cast<std::size_t>(k) * dk + i] * t[static_cast<std::size_t>(k) * dk + j];
                sigma.set(i, j, s);
            }
        try {
            const SymMatrix corr = cov_to_corr(sigma);
            detail::cholesky_lower(corr);  // reject near-singular draws
            return corr;
        } catch (const Error&) {
            if (retries) ++*retries;
        }
    }
}

struct Distribution {
    enum class Family { Gaussian, Student };
    Family family = Family::Gaussian;
    int student_df = 0;

    static Distribution gaussian() { return {Family::Gaussian, 0}; }
    static Distribution student(int df) {
        if (df < 1) throw InvalidArgumentError("Distribution: student df must be >= 1");
        return {Family::Student, df};
    }

    std::string name() const {
        return family == Family::Gaussian ? "gaussian" : "student" + std::to_string(student_df);
    }
};

// Block-independent rows: each block gets its own correlation matrix, each
// row's block draw is Gaussian through the block's Cholesky factor; Student-t
// divides by one sqrt(chi2_df / df) per row per block. Means are zero.
inline std::vector<std::vector<double>> sample_dataset(const Partition& partition, int n,
                                                       const Distribution& dist,
                                                       const std::vector<SymMatrix>& block_corr,
                                                       Rng& rng) {
    if (n < 2) throw InvalidArgumentError("sample_dataset: need n >= 2");
    if (block_corr.size() != partition.blocks().size())
        throw InvalidArgumentError("sample_dataset: one correlation matrix per block required");
    const int d = partition.d();
    std::vector<std::vector<double>> chol;
    chol.reserve(block_corr.size());
    for (std::size_t b = 0; b < block_corr.size(); ++b) {
        if (block_corr[b].dim() != partition.blocks()[b].size())
            throw InvalidArgumentError("sample_dataset: block correlation dimension mismatch");
        chol.push_back(detail::cholesky_lower(block_corr[b]));
    }

    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(d), 0.0));
    std::vector<double> z;
    for (int r = 0; r < n; ++r) {
        for (std::size_t b = 0; b < block_corr.size(); ++b) {
            const IndexSet& blk = partition.blocks()[b];
            const int dk = blk.size();
            z.assign(static_cast<std::size_t>(dk), 0.0);
            for (int t = 0; t < dk; ++t) z[static_cast<std::size_t>(t)] = rng.normal();
            double scale = 1.0;
            if (dist.family == Distribution::Family::Student)
                scale = 1.0 / std::sqrt(rng.chi_square(dist.student_df) / dist.student_df);
            const auto& L = chol[b];
            for (int t = 0; t < dk; ++t) {
                double g = 0.0;
                for (int k = 0; k <= t; ++k)
                    g += L[static_cast<std::size_t>(t) * dk + k] * z[static_cast<std::size_t>(k)];
                rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(blk[t])] = g * scale;
            }
        }
    }
    return rows;
}

// Convenience overload that draws the block correlations itself.
inline std::vector<std::vector<double>> sample_dataset(const Partition& partition, int n,
                                                       const Distribution& dist, Rng& rng) {
    std::vector<SymMatrix> block_corr;
    block_corr.reserve(partition.blocks().size());
    for (const IndexSet& blk : partition.blocks())
        block_corr.push_back(random_cluster_correlation(blk.size(), rng));
    return sample_dataset(partition, n, dist, block_corr, rng);
}

// A_d(rho): 1 on the diagonal, rho everywhere else. Positive definite for
// 0 <= rho < 1 with eigenvalues 1 + (d-1) rho (once) and 1 - rho (d-1 times).
inline SymMatrix homogeneous_matrix(int d, double rho) {
    if (d < 1) throw InvalidArgumentError("homogeneous_matrix: d must be >= 1");
    if (!(rho >= 0.0 && rho < 1.0))
        throw InvalidArgumentError("homogeneous_matrix: need 0 <= rho < 1");
    SymMatrix m(d);
    for (int i = 0; i < d; ++i) {
        m.set(i, i, 1.0);
        for (int j = 0; j < i; ++j) m.set(i, j, rho);
    }
    return m;
}

// Exact Gaussian mutual information between blocks of sizes di and dj under
// the homogeneous model A_{di+dj}(rho):
// I = (1/2) ln( [1+(di-1)rho][1+(dj-1)rho] / ((1-rho)[1+(di+dj-1)rho]) ).
inline double analytic_homogeneous_mi(int di, int dj, double rho) {
    if (di < 1 || dj < 1) throw InvalidArgumentError("analytic_homogeneous_mi: block sizes must be >= 1");
    if (!(rho >= 0.0 && rho < 1.0))
        throw InvalidArgumentError("analytic_homogeneous_mi: need 0 <= rho < 1");
    const double num = (1.0 + (di - 1) * rho) * (1.0 + (dj - 1) * rho);
    const double den = (1.0 - rho) * (1.0 + (di + dj - 1) * rho);
    return 0.5 * std::log(num / den);
}

}  // namespace bahc
