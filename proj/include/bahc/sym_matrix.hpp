#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bahc/error.hpp"

namespace bahc {

// Strictly increasing variable indices selecting a principal submatrix.
class IndexSet {
public:
    explicit IndexSet(std::vector<int> indices) : idx_(std::move(indices)) {
        if (idx_.empty()) throw InvalidArgumentError("IndexSet: must be non-empty");
        for (std::size_t k = 0; k < idx_.size(); ++k) {
            if (idx_[k] < 0)
                throw InvalidArgumentError("IndexSet: negative index");
            if (k > 0 && idx_[k] <= idx_[k - 1])
                throw InvalidArgumentError("IndexSet: indices must be strictly increasing");
        }
    }

    static IndexSet single(int i) { return IndexSet(std::vector<int>{i}); }

    int size() const { return static_cast<int>(idx_.size()); }
    int operator[](int k) const { return idx_[static_cast<std::size_t>(k)]; }
    const std::vector<int>& indices() const { return idx_; }
    int max_index() const { return idx_.back(); }

    bool disjoint_with(const IndexSet& other) const {
        std::size_t a = 0, b = 0;
        while (a < idx_.size() && b < other.idx_.size()) {
            if (idx_[a] == other.idx_[b]) return false;
            if (idx_[a] < other.idx_[b]) ++a; else ++b;
        }
        return true;
    }

    // Sorted union; inputs must be disjoint.
    IndexSet union_with(const IndexSet& other) const {
        if (!disjoint_with(other))
            throw InvalidArgumentError("IndexSet: union of overlapping index sets");
        std::vector<int> out;
        out.reserve(idx_.size() + other.idx_.size());
        std::merge(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                   std::back_inserter(out));
        return IndexSet(std::move(out));
    }

    std::string to_string() const {
        std::string s = "{";
        for (std::size_t k = 0; k < idx_.size(); ++k) {
            if (k) s += ",";
            s += std::to_string(idx_[k]);
        }
        return s + "}";
    }

    bool operator==(const IndexSet& other) const { return idx_ == other.idx_; }

private:
    std::vector<int> idx_;
};

// Symmetric matrix in packed lower-triangular storage: one copy per entry,
// so (i,j) and (j,i) are the same value by construction.
class SymMatrix {
public:
    explicit SymMatrix(int dim) : dim_(dim) {
        if (dim < 1) throw InvalidArgumentError("SymMatrix: dim must be >= 1");
        data_.assign(static_cast<std::size_t>(dim) * (dim + 1) / 2, 0.0);
    }

    static SymMatrix identity(int dim) {
        SymMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
        return m;
    }

    static SymMatrix diagonal(const std::vector<double>& diag) {
        SymMatrix m(static_cast<int>(diag.size()));
        for (int i = 0; i < m.dim(); ++i) m.set(i, i, diag[static_cast<std::size_t>(i)]);
        return m;
    }

    int dim() const { return dim_; }

    double operator()(int i, int j) const { return data_[offset(i, j)]; }
    void set(int i, int j, double v) { data_[offset(i, j)] = v; }
    void add(int i, int j, double v) { data_[offset(i, j)] += v; }

    SymMatrix scaled(double c) const {
        SymMatrix out = *this;
        for (double& v : out.data_) v *= c;
        return out;
    }

    SymMatrix plus(const SymMatrix& other) const {
        if (other.dim_ != dim_) throw InvalidArgumentError("SymMatrix: dimension mismatch in sum");
        SymMatrix out = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] += other.data_[k];
        return out;
    }

    double max_abs_diag() const {
        double m = 0.0;
        for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs((*this)(i, i)));
        return m;
    }

private:
    std::size_t offset(int i, int j) const {
        if (i < 0 || j < 0 || i >= dim_ || j >= dim_)
            throw InvalidArgumentError("SymMatrix: index out of range");
        if (i < j) std::swap(i, j);
        return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
    }

    int dim_;
    std::vector<double> data_;
};

// Principal submatrix selected by idx.
inline SymMatrix restrict(const SymMatrix& m, const IndexSet& idx) {
    if (idx.max_index() >= m.dim())
        throw InvalidArgumentError("restrict: index " + std::to_string(idx.max_index()) +
                                   " out of range for dim " + std::to_string(m.dim()));
    SymMatrix out(idx.size());
    for (int a = 0; a < idx.size(); ++a)
        for (int b = 0; b <= a; ++b) out.set(a, b, m(idx[a], idx[b]));
    return out;
}

namespace detail {

// Lower Cholesky factor of a symmetric positive definite matrix.
// A pivot below tol * max-diagonal counts as non-PD.
inline std::vector<double> cholesky_lower(const SymMatrix& m, double pivot_tol = 1e-12) {
    const int d = m.dim();
    std::vector<double> L(static_cast<std::size_t>(d) * d, 0.0);
    const double floor = pivot_tol * std::max(m.max_abs_diag(), 1e-300);
    for (int j = 0; j < d; ++j) {
        double sum = m(j, j);
        for (int k = 0; k < j; ++k) sum -= L[j * d + k] * L[j * d + k];
        if (!(sum > floor))
            throw NotPositiveDefiniteError("matrix is not positive definite", j);
        const double ljj = std::sqrt(sum);
        L[j * d + j] = ljj;
        for (int i = j + 1; i < d; ++i) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= L[i * d + k] * L[j * d + k];
            L[i * d + j] = s / ljj;
        }
    }
    return L;
}

}  // namespace detail

// ln|m| for symmetric positive definite m, via Cholesky.
inline double log_det_pd(const SymMatrix& m) {
    const auto L = detail::cholesky_lower(m);
    const int d = m.dim();
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += std::log(L[static_cast<std::size_t>(i) * d + i]);
    return 2.0 * s;
}

// Rescale a covariance-like matrix to unit diagonal.
inline SymMatrix cov_to_corr(const SymMatrix& m) {
    const int d = m.dim();
    std::vector<double> inv_sd(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const double v = m(i, i);
        if (!(v > 0.0))
            throw DegenerateVarianceError("cov_to_corr: non-positive diagonal entry at index " +
                                          std::to_string(i));
        inv_sd[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(v);
    }
    SymMatrix out(d);
    for (int i = 0; i < d; ++i) {
        out.set(i, i, 1.0);
        for (int j = 0; j < i; ++j)
            out.set(i, j, m(i, j) * inv_sd[static_cast<std::size_t>(i)] * inv_sd[static_cast<std::size_t>(j)]);
    }
    return out;
}

}  // namespace bahc
