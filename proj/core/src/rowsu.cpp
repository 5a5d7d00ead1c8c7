#include "rowsu/rowsu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rowsu/mask_greedy.hpp"
#include "rowsu/rng.hpp"
#include "rowsu/robust_score.hpp"

namespace rowsu {

std::vector<double> robust_weighted_scores(const std::vector<double>& psi,
                                           const std::vector<double>& weights) {
    if (psi.size() != weights.size()) {
        throw std::invalid_argument("robust_weighted_scores: size mismatch");
    }
    std::vector<double> phi(psi.size());
    for (std::size_t j = 0; j < psi.size(); ++j) {
        if (std::isinf(psi[j])) {
            phi[j] = weights[j] != 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        } else {
            phi[j] = std::abs(weights[j] * psi[j]);
        }
    }
    return phi;
}

RankedGenes rowsu_rank_all(const Dataset& train, const RowsuConfig& cfg) {
    const std::size_t p = train.n_genes();
    if (cfg.final_total > p) {
        throw std::invalid_argument("rowsu: final_total exceeds gene count");
    }
    if (cfg.min_subset_cap && *cfg.min_subset_cap > cfg.final_total) {
        throw std::invalid_argument("rowsu: min_subset_cap exceeds final_total");
    }

    BalanceConfig bal = cfg.balance;
    bal.seed = derive_seed(cfg.seed, {0xba1});
    const BalanceResult balanced = balance(train, bal);
    const Dataset& data = balanced.data;

    // Stage 1: greedy minimum subset on gene masks.
    const CoreIntervals iv = core_intervals(data);
    const std::vector<BitMask> masks = gene_masks(data, iv);
    const PosScores pos = pos_scores(data, iv);
    const std::size_t cap = cfg.min_subset_cap.value_or(cfg.final_total);
    const std::vector<std::size_t> subset =
        greedy_min_subset(masks, pos, std::min(cap, cfg.final_total));

    std::vector<bool> in_subset(p, false);
    for (std::size_t g : subset) {
        in_subset[g] = true;
    }
    std::vector<std::size_t> remaining;
    remaining.reserve(p - subset.size());
    for (std::size_t j = 0; j < p; ++j) {
        if (!in_subset[j]) {
            remaining.push_back(j);
        }
    }

    RankedGenes out;
    out.genes = subset;
    out.scores.assign(subset.size(), std::numeric_limits<double>::infinity());

    if (!remaining.empty()) {
        // Stage 2: robust Fisher scores and SVM weights on the remaining
        // genes of the balanced data.
        const Dataset rem = data.subset_genes(remaining);
        const std::vector<double> psi = rfish_values(class_summary(rem), /*balanced=*/true);

        SvmConfig svm_cfg;
        svm_cfg.C = cfg.svm_c;
        svm_cfg.tolerance = cfg.svm_tolerance;
        svm_cfg.seed = derive_seed(cfg.seed, {0x53f});
        svm_cfg.standardize = true;
        const SvmModel model = train_linear_svm(rem, svm_cfg);

        const std::vector<double> phi = robust_weighted_scores(psi, model.w);
        const RankedGenes ranked = ranked_from_scores(phi);
        for (std::size_t r = 0; r < ranked.genes.size(); ++r) {
            out.genes.push_back(remaining[ranked.genes[r]]);
            out.scores.push_back(ranked.scores[r]);
        }
    }
    return out;
}

RankedGenes rowsu_select(const Dataset& train, const RowsuConfig& cfg) {
    RankedGenes all = rowsu_rank_all(train, cfg);
    const std::size_t keep = std::min(cfg.final_total, all.genes.size());
    all.genes.resize(keep);
    all.scores.resize(keep);
    return all;
}

} // namespace rowsu
