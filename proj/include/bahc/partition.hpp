#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "bahc/error.hpp"
#include "bahc/sym_matrix.hpp"

namespace bahc {

// Disjoint non-empty blocks covering {0 .. d-1}.
class Partition {
public:
    Partition(int d, std::vector<IndexSet> blocks) : d_(d), blocks_(std::move(blocks)) {
        std::vector<char> seen(static_cast<std::size_t>(d), 0);
        int covered = 0;
        for (const auto& b : blocks_) {
            for (int k = 0; k < b.size(); ++k) {
                const int v = b[k];
                if (v >= d) throw InvalidArgumentError("Partition: index out of range");
                if (seen[static_cast<std::size_t>(v)])
                    throw InvalidArgumentError("Partition: blocks overlap at index " + std::to_string(v));
                seen[static_cast<std::size_t>(v)] = 1;
                ++covered;
            }
        }
        if (covered != d) throw InvalidArgumentError("Partition: blocks do not cover all indices");
        canonicalize();
    }

    static Partition singletons(int d) {
        std::vector<IndexSet> blocks;
        blocks.reserve(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) blocks.push_back(IndexSet::single(i));
        return Partition(d, std::move(blocks));
    }

    static Partition one_block(int d) {
        std::vector<int> all(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) all[static_cast<std::size_t>(i)] = i;
        return Partition(d, {IndexSet(std::move(all))});
    }

    int d() const { return d_; }
    int num_blocks() const { return static_cast<int>(blocks_.size()); }
    const std::vector<IndexSet>& blocks() const { return blocks_; }

    // Block label of each variable, by canonical block order.
    std::vector<int> labels() const {
        std::vector<int> lab(static_cast<std::size_t>(d_), -1);
        for (int b = 0; b < num_blocks(); ++b)
            for (int k = 0; k < blocks_[static_cast<std::size_t>(b)].size(); ++k)
                lab[static_cast<std::size_t>(blocks_[static_cast<std::size_t>(b)][k])] = b;
        return lab;
    }

    // Set-of-blocks equality; block order is canonical so == suffices.
    bool operator==(const Partition& other) const {
        return d_ == other.d_ && blocks_ == other.blocks_;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            if (b) s += " | ";
            for (int k = 0; k < blocks_[b].size(); ++k) {
                if (k) s += ",";
                s += std::to_string(blocks_[b][k]);
            }
        }
        return s;
    }

private:
    void canonicalize() {
        std::sort(blocks_.begin(), blocks_.end(),
                  [](const IndexSet& a, const IndexSet& b) { return a[0] < b[0]; });
    }

    int d_;
    std::vector<IndexSet> blocks_;
};

}  // namespace bahc
