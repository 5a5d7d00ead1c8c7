#pragma once

#include <vector>

#include "rowsu/types.hpp"

namespace rowsu {

/// Classical Fisher score: between-class scatter of the class means over the
/// count-weighted sample variances. 0/0 gives 0.
RankedGenes fisher_rank(const Dataset& train);
std::vector<double> fisher_values(const Dataset& train);

/// Normal-approximation Wilcoxon rank-sum score |W - E[W]| / sd(W) with
/// midranks and tie-corrected null variance; all-tied genes score 0.
RankedGenes wilcoxon_rank(const Dataset& train);
std::vector<double> wilcoxon_values(const Dataset& train);

/// Signal-to-noise ratio |mean+ - mean-| / (sd+ + sd-). Zero denominator
/// gives 0 for equal means and the +inf sentinel otherwise.
RankedGenes snr_rank(const Dataset& train);
std::vector<double> snr_values(const Dataset& train);

/// Proportion-overlap baseline: the greedy minimum subset first (selection
/// order), then the remaining genes by ascending overlap score. Reported
/// scores are the per-gene overlap proportions.
RankedGenes pos_rank(const Dataset& train);

/// Greedy minimum-redundancy maximum-relevance ordering using 3-bin
/// discretization at mean +/- sd and the mutual-information-difference
/// objective. The first k genes are the greedy picks (scores are the
/// objective at selection); the rest follow by descending relevance so that
/// every gene appears exactly once.
RankedGenes mrmr_rank(const Dataset& train, std::size_t k);

} // namespace rowsu
