#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rowsu/balance.hpp"
#include "rowsu/svm.hpp"
#include "rowsu/types.hpp"

namespace rowsu {

struct RowsuConfig {
    BalanceConfig balance;
    /// Cap on the greedy minimum subset; unset -> run to the natural stop,
    /// bounded above by final_total either way.
    std::optional<std::size_t> min_subset_cap;
    /// p*: total genes selected (minimum subset + weighted-score picks).
    std::size_t final_total = 20;
    double svm_c = 1.0;
    double svm_tolerance = 1e-3;
    std::uint64_t seed = 0;
};

/// Fuses robust scores with SVM weights: phi_j = |w_j * psi_j|. An infinite
/// psi combines to +inf when |w| > 0 and to 0 when w == 0.
std::vector<double> robust_weighted_scores(const std::vector<double>& psi,
                                           const std::vector<double>& weights);

/// Full ROWSU ordering over all genes: the greedy minimum subset first (in
/// selection order), then every remaining gene by descending robust weighted
/// score phi. Scores for the minimum-subset prefix are +inf sentinels.
RankedGenes rowsu_rank_all(const Dataset& train, const RowsuConfig& cfg);

/// Top final_total genes of rowsu_rank_all: the union of the minimum-subset
/// pool and the top weighted-score pool, p* genes in total.
RankedGenes rowsu_select(const Dataset& train, const RowsuConfig& cfg);

} // namespace rowsu
