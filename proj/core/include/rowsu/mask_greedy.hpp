#pragma once

#include <cstdint>
#include <vector>

#include "rowsu/types.hpp"

namespace rowsu {

/// Fixed-size bit vector over training samples.
class BitMask {
public:
    BitMask() = default;
    explicit BitMask(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    std::size_t popcount() const;
    bool any() const;

    /// this &= ~other (removes other's bits).
    void and_not(const BitMask& other);

    bool operator==(const BitMask& other) const = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Per-gene, per-class robust expression range: IQR whiskers
/// [Q1 - 1.5*IQR, Q3 + 1.5*IQR] clamped to the class's observed [min, max].
/// Quartiles use type-7 interpolation.
struct CoreIntervals {
    std::vector<double> neg_low, neg_high;
    std::vector<double> pos_low, pos_high;

    double low(std::size_t gene, Label l) const {
        return l == Label::pos ? pos_low[gene] : neg_low[gene];
    }
    double high(std::size_t gene, Label l) const {
        return l == Label::pos ? pos_high[gene] : neg_high[gene];
    }
};

struct PosScores {
    /// Proportion of samples falling in the overlap of the two class
    /// intervals; 0 when the intervals are disjoint. Lower is more
    /// discriminative.
    std::vector<double> pos;
    /// Class with more unambiguously covered samples; ties go to the class
    /// with the wider interval, then neg.
    std::vector<Label> dominant;
};

CoreIntervals core_intervals(const Dataset& train);

/// bit(i, j) = 1 iff sample i's value on gene j lies inside its own class's
/// core interval and outside the other class's.
std::vector<BitMask> gene_masks(const Dataset& train, const CoreIntervals& iv);

PosScores pos_scores(const Dataset& train, const CoreIntervals& iv);

/// Greedy set cover over gene masks: repeatedly selects the gene with the
/// most 1-bits (ties: smaller POS score, then lower index) and removes its
/// covered samples from every remaining mask. Stops at max_genes (0 = no
/// cap) or when no 1-bit remains. Returns genes in selection order.
std::vector<std::size_t> greedy_min_subset(const std::vector<BitMask>& masks,
                                           const PosScores& pos, std::size_t max_genes);

} // namespace rowsu
