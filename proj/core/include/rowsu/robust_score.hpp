#pragma once

#include <vector>

#include "rowsu/types.hpp"

namespace rowsu {

/// Per-gene robust location/spread summary: class medians, the global
/// median, and the mean absolute deviation of each class about its own
/// median.
struct ClassSummary {
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    std::vector<double> median_pos;
    std::vector<double> median_neg;
    std::vector<double> median_all;
    std::vector<double> mad_pos; // mean |x - class median|
    std::vector<double> mad_neg;
};

ClassSummary class_summary(const Dataset& train);

/// Robust Fisher score per gene:
///   balanced:  psi = (|m+ - m| + |m- - m|) / (D+ + D-)
///   weighted:  psi = (n+ |m+ - m| + n- |m- - m|) / (n+ D+ + n- D-)
/// 0/0 gives 0; a positive numerator over a zero denominator gives the +inf
/// sentinel, which ranks above every finite score.
RankedGenes rfish_scores(const ClassSummary& summary, bool balanced);

/// Raw psi vector in gene order (same conventions as rfish_scores).
std::vector<double> rfish_values(const ClassSummary& summary, bool balanced);

} // namespace rowsu
