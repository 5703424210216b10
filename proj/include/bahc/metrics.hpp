#pragma once

#include <cstdint>
#include <vector>

#include "bahc/ahc.hpp"
#include "bahc/error.hpp"
#include "bahc/partition.hpp"
#include "bahc/sym_matrix.hpp"

namespace bahc {

namespace detail {

inline void check_same_d(const Partition& p, const Partition& q) {
    if (p.d() != q.d()) throw InvalidArgumentError("partition comparison: dimension mismatch");
}

inline double comb2(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace detail

// Fraction of unordered pairs classified identically (together in both or
// apart in both). Raw, unnormalized.
inline double rand_index(const Partition& p, const Partition& q) {
    detail::check_same_d(p, q);
    const int d = p.d();
    if (d < 2) return 1.0;
    const auto lp = p.labels(), lq = q.labels();
    long long agree = 0, total = 0;
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) {
            const bool sp = lp[static_cast<std::size_t>(a)] == lp[static_cast<std::size_t>(b)];
            const bool sq = lq[static_cast<std::size_t>(a)] == lq[static_cast<std::size_t>(b)];
            agree += (sp == sq);
            ++total;
        }
    return static_cast<double>(agree) / static_cast<double>(total);
}

// Hubert-Arabie adjusted Rand index via the contingency table. When the
// chance-correction denominator vanishes (both all-singletons or both
// one-block), returns 1 for identical partitions and 0 otherwise.
inline double adjusted_rand(const Partition& p, const Partition& q) {
    detail::check_same_d(p, q);
    const int d = p.d();
    const auto lp = p.labels(), lq = q.labels();
    const int bp = p.num_blocks(), bq = q.num_blocks();
    std::vector<long long> table(static_cast<std::size_t>(bp) * bq, 0);
    std::vector<long long> rows(static_cast<std::size_t>(bp), 0), cols(static_cast<std::size_t>(bq), 0);
    for (int v = 0; v < d; ++v) {
        const int a = lp[static_cast<std::size_t>(v)], b = lq[static_cast<std::size_t>(v)];
        ++table[static_cast<std::size_t>(a) * bq + b];
        ++rows[static_cast<std::size_t>(a)];
        ++cols[static_cast<std::size_t>(b)];
    }
    double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (long long v : table) sum_ij += detail::comb2(static_cast<double>(v));
    for (long long v : rows) sum_a += detail::comb2(static_cast<double>(v));
    for (long long v : cols) sum_b += detail::comb2(static_cast<double>(v));
    const double nc2 = detail::comb2(static_cast<double>(d));
    const double expected = (nc2 > 0.0) ? sum_a * sum_b / nc2 : 0.0;
    const double denom = 0.5 * (sum_a + sum_b) - expected;
    if (denom == 0.0) return p == q ? 1.0 : 0.0;
    return (sum_ij - expected) / denom;
}

// True iff the two partitions are identical as sets of blocks.
inline bool exact_recovery(const Partition& p, const Partition& truth) {
    detail::check_same_d(p, truth);
    return p == truth;
}

// Pairwise co-membership frequencies across a stack of partitions.
struct StabilityMatrix {
    int d;
    SymMatrix freq;  // entries in [0,1], unit diagonal
};

struct ConsensusResult {
    StabilityMatrix stability;
    Partition partition;
};

// Evidence accumulation: average the co-membership adjacency matrices, then
// run Ward linkage on similarity `freq` (distance 1 - freq) and cut at k.
inline ConsensusResult consensus(const std::vector<Partition>& partitions, int k,
                                 std::uint64_t tie_seed = 0) {
    if (partitions.empty()) throw InvalidArgumentError("consensus: no input partitions");
    const int d = partitions.front().d();
    for (const auto& p : partitions)
        if (p.d() != d) throw InvalidArgumentError("consensus: partitions have mismatched dimensions");
    if (k < 1 || k > d) throw InvalidArgumentError("consensus: k out of range");

    SymMatrix freq(d);
    for (const auto& p : partitions) {
        const auto lab = p.labels();
        for (int a = 0; a < d; ++a)
            for (int b = 0; b <= a; ++b)
                if (lab[static_cast<std::size_t>(a)] == lab[static_cast<std::size_t>(b)])
                    freq.add(a, b, 1.0);
    }
    const double inv = 1.0 / static_cast<double>(partitions.size());
    for (int a = 0; a < d; ++a)
        for (int b = 0; b <= a; ++b) freq.set(a, b, freq(a, b) * inv);

    SimilaritySpec ward{Measure::LinkWard, false, std::nullopt};
    const Hierarchy h = ahc_linkage(freq, ward, tie_seed);
    return ConsensusResult{StabilityMatrix{d, freq}, cut(h, k)};
}

}  // namespace bahc
