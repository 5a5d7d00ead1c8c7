#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rowsu/types.hpp"

namespace rowsu {

/// Parameters for one stratified holdout split.
struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
    /// maj:min carried for callers that pair splitting with
    /// enforce_imbalance; stratified_split itself never discards rows
    /// (train and test always partition the input exactly).
    std::optional<std::pair<int, int>> imbalance_ratio;
};

struct SplitResult {
    Dataset train;
    Dataset test;
};

/// Reads an expression CSV: header row, one column per gene, one label
/// column. Rows whose label equals positive_label become pos, the other
/// label becomes neg. The label column must contain exactly two distinct
/// values. Errors carry the offending line/column.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& positive_label);

/// Writes the same CSV layout with 17-significant-digit values so that
/// load_csv(save_csv(d)) reproduces values, labels and gene names exactly.
/// Labels are written as "pos"/"neg".
void save_csv(const Dataset& d, const std::string& path, const std::string& label_column = "class");

/// Discards randomly chosen positive (minority) rows until neg:pos matches
/// maj:min as closely as integer counts allow (target pos count =
/// floor(neg * min / maj)). Throws if pos is not the minority class or if
/// the ratio could only be reached by discarding majority rows.
Dataset enforce_imbalance(const Dataset& d, std::pair<int, int> ratio, std::uint64_t seed);

/// Stratified holdout split. Per class, floor(fraction * n_c) rows go to
/// train and the remainder to test; both partitions preserve the original
/// row order. Each class needs at least two samples.
SplitResult stratified_split(const Dataset& d, const SplitSpec& spec);

struct SynthSpec {
    std::size_t n_neg = 80;
    std::size_t n_pos = 20;
    std::size_t n_genes = 500;
    std::size_t n_informative = 20;
    double shift = 3.0;
    double outlier_rate = 0.0;
    std::uint64_t seed = 0;
};

struct SynthResult {
    Dataset data;
    std::vector<std::size_t> planted; // informative gene indices, ascending
};

/// Synthetic benchmark generator.
///
/// Non-informative genes are N(0, 1) in both classes. Informative genes keep
/// neg at N(0, 1) while each pos cell comes from a two-component subtype
/// mixture whose mean is exactly `shift`: weight 0.66 at N((39/22)*shift, 1)
/// and weight 0.34 at N(-shift/2, 1), mixed per cell. One randomly chosen
/// positive sample is an erratic expressor: its informative cells are
/// N(shift, 1 + (4.5*shift)^2), mean-neutral but high-variance. With
/// probability outlier_rate any cell is replaced by a gross outlier of
/// magnitude 50. Bit-identical output for a fixed seed. Returns the planted
/// informative gene indices for recovery scoring.
SynthResult synth_generate(const SynthSpec& spec);

} // namespace rowsu
