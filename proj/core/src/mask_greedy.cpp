#include "rowsu/mask_greedy.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "rowsu/stats.hpp"

namespace rowsu {

std::size_t BitMask::popcount() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) {
        n += static_cast<std::size_t>(std::popcount(w));
    }
    return n;
}

bool BitMask::any() const {
    for (std::uint64_t w : words_) {
        if (w != 0) {
            return true;
        }
    }
    return false;
}

void BitMask::and_not(const BitMask& other) {
    for (std::size_t k = 0; k < words_.size(); ++k) {
        words_[k] &= ~other.words_[k];
    }
}

CoreIntervals core_intervals(const Dataset& train) {
    for (Label l : {Label::neg, Label::pos}) {
        if (train.count(l) < 2) {
            throw std::invalid_argument(std::string("core_intervals: class ") + label_name(l) +
                                        " has fewer than 2 samples");
        }
    }
    const std::size_t p = train.n_genes();
    CoreIntervals iv;
    iv.neg_low.resize(p);
    iv.neg_high.resize(p);
    iv.pos_low.resize(p);
    iv.pos_high.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        for (Label l : {Label::neg, Label::pos}) {
            std::vector<double> v = train.gene_values(j, l);
            const auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
            const double mn = *mn_it;
            const double mx = *mx_it;
            const double q1 = quantile_type7(v, 0.25);
            const double q3 = quantile_type7(v, 0.75);
            const double iqr = q3 - q1;
            const double low = std::max(mn, q1 - 1.5 * iqr);
            const double high = std::min(mx, q3 + 1.5 * iqr);
            if (l == Label::pos) {
                iv.pos_low[j] = low;
                iv.pos_high[j] = high;
            } else {
                iv.neg_low[j] = low;
                iv.neg_high[j] = high;
            }
        }
    }
    return iv;
}

namespace {

bool unambiguous(double v, Label own, const CoreIntervals& iv, std::size_t gene) {
    const Label other = own == Label::pos ? Label::neg : Label::pos;
    const bool inside_own = v >= iv.low(gene, own) && v <= iv.high(gene, own);
    const bool outside_other = v < iv.low(gene, other) || v > iv.high(gene, other);
    return inside_own && outside_other;
}

} // namespace

std::vector<BitMask> gene_masks(const Dataset& train, const CoreIntervals& iv) {
    const std::size_t n = train.n_samples();
    const std::size_t p = train.n_genes();
    std::vector<BitMask> masks(p, BitMask(n));
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            if (unambiguous(train.value(i, j), train.label(i), iv, j)) {
                masks[j].set(i);
            }
        }
    }
    return masks;
}

PosScores pos_scores(const Dataset& train, const CoreIntervals& iv) {
    const std::size_t n = train.n_samples();
    const std::size_t p = train.n_genes();
    PosScores out;
    out.pos.resize(p);
    out.dominant.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        const double o_low = std::max(iv.neg_low[j], iv.pos_low[j]);
        const double o_high = std::min(iv.neg_high[j], iv.pos_high[j]);
        std::size_t in_overlap = 0;
        std::size_t unamb_neg = 0;
        std::size_t unamb_pos = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = train.value(i, j);
            if (o_low <= o_high && v >= o_low && v <= o_high) {
                ++in_overlap;
            }
            if (unambiguous(v, train.label(i), iv, j)) {
                (train.label(i) == Label::pos ? unamb_pos : unamb_neg)++;
            }
        }
        out.pos[j] = o_low <= o_high ? static_cast<double>(in_overlap) / static_cast<double>(n) : 0.0;
        if (unamb_pos != unamb_neg) {
            out.dominant[j] = unamb_pos > unamb_neg ? Label::pos : Label::neg;
        } else {
            const double w_neg = iv.neg_high[j] - iv.neg_low[j];
            const double w_pos = iv.pos_high[j] - iv.pos_low[j];
            out.dominant[j] = w_pos > w_neg ? Label::pos : Label::neg;
        }
    }
    return out;
}

std::vector<std::size_t> greedy_min_subset(const std::vector<BitMask>& masks,
                                           const PosScores& pos, std::size_t max_genes) {
    if (masks.empty()) {
        throw std::invalid_argument("greedy_min_subset: no gene masks");
    }
    if (pos.pos.size() != masks.size()) {
        throw std::invalid_argument("greedy_min_subset: pos scores and masks disagree in size");
    }
    std::vector<BitMask> work = masks;
    std::vector<bool> taken(masks.size(), false);
    std::vector<std::size_t> selected;
    while (max_genes == 0 || selected.size() < max_genes) {
        std::size_t best = masks.size();
        std::size_t best_bits = 0;
        for (std::size_t j = 0; j < work.size(); ++j) {
            if (taken[j]) {
                continue;
            }
            const std::size_t bits = work[j].popcount();
            if (bits == 0) {
                continue;
            }
            if (best == masks.size() || bits > best_bits ||
                (bits == best_bits && pos.pos[j] < pos.pos[best])) {
                best = j;
                best_bits = bits;
            }
        }
        if (best == masks.size()) {
            break; // no 1-bits remain
        }
        selected.push_back(best);
        taken[best] = true;
        const BitMask covered = work[best];
        for (std::size_t j = 0; j < work.size(); ++j) {
            if (!taken[j]) {
                work[j].and_not(covered);
            }
        }
    }
    return selected;
}

} // namespace rowsu
