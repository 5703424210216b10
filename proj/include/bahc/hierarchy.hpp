#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "bahc/error.hpp"
#include "bahc/partition.hpp"
#include "bahc/sym_matrix.hpp"

namespace bahc {

struct MergeStep {
    int step;  // 1-based
    IndexSet left;
    IndexSet right;
    double similarity;
    std::optional<double> cumulative_log_bf;  // Bayesian measures only
    int ties_broken;                          // number of pairs tied at the maximum
};

// Pairwise similarities among the clusters remaining when an early stop
// triggered; kept for diagnostics (the merges that were not performed).
struct StopState {
    std::vector<IndexSet> clusters;
    SymMatrix similarities;  // indexed like `clusters`, diagonal unused
};

struct Hierarchy {
    int d = 0;
    std::vector<MergeStep> steps;
    bool stopped_early = false;
    std::optional<int> stop_level;  // merges performed before the stop rule fired
    bool bayesian = false;
    std::optional<StopState> stop_state;
    // pair evaluations skipped because the entropy normalizer degenerated
    int degenerate_pairs_skipped = 0;

    // Partition after the first `merges` steps.
    Partition partition_after(int merges) const {
        if (merges < 0 || merges > static_cast<int>(steps.size()))
            throw InvalidArgumentError("Hierarchy: merge count out of range");
        std::vector<IndexSet> blocks;
        blocks.reserve(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) blocks.push_back(IndexSet::single(i));
        for (int m = 0; m < merges; ++m) {
            const MergeStep& st = steps[static_cast<std::size_t>(m)];
            std::vector<IndexSet> next;
            next.reserve(blocks.size() - 1);
            bool merged = false;
            for (const auto& b : blocks) {
                if (b == st.left || b == st.right) {
                    if (!merged) {
                        next.push_back(st.left.union_with(st.right));
                        merged = true;
                    }
                } else {
                    next.push_back(b);
                }
            }
            blocks = std::move(next);
        }
        return Partition(d, std::move(blocks));
    }
};

// Partition with exactly k clusters, i.e. after d - k merges.
inline Partition cut(const Hierarchy& h, int k) {
    if (k < 1 || k > h.d) throw InvalidArgumentError("cut: k out of range");
    const int merges = h.d - k;
    if (merges > static_cast<int>(h.steps.size()))
        throw UnreachableLevelError("cut: level with " + std::to_string(k) +
                                    " clusters was not built (clustering stopped after " +
                                    std::to_string(h.steps.size()) + " merges)");
    return h.partition_after(merges);
}

// Number of merges the stopping rule accepts: everything before the first
// step whose (best-available) similarity is negative.
inline int stop_level(const Hierarchy& h) {
    if (h.stopped_early && h.stop_level) return *h.stop_level;
    for (std::size_t m = 0; m < h.steps.size(); ++m)
        if (h.steps[m].similarity < 0.0) return static_cast<int>(m);
    return static_cast<int>(h.steps.size());
}

// Partition selected by the automatic stopping rule; replays the rule on a
// full hierarchy.
inline Partition auto_partition(const Hierarchy& h) {
    return h.partition_after(stop_level(h));
}

struct CurvePoint {
    int level;        // merges performed
    double log_bf;    // natural log
    double log10_bf;
};

// Cumulative log Bayes factor of the partition at each level against the
// all-singleton partition (level 0 is 0 by definition).
inline std::vector<CurvePoint> cumulative_curve(const Hierarchy& h) {
    if (!h.bayesian)
        throw UnsupportedMeasureError("cumulative_curve: only Bayesian hierarchies carry a log Bayes factor");
    std::vector<CurvePoint> out;
    out.reserve(h.steps.size() + 1);
    double run = 0.0;
    out.push_back({0, 0.0, 0.0});
    for (const auto& st : h.steps) {
        run += st.similarity;
        out.push_back({st.step, run, run / std::numbers::ln10});
    }
    return out;
}

}  // namespace bahc
