#include "rowsu/robust_score.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rowsu/stats.hpp"

namespace rowsu {

ClassSummary class_summary(const Dataset& train) {
    const std::size_t p = train.n_genes();
    ClassSummary s;
    s.n_pos = train.count(Label::pos);
    s.n_neg = train.count(Label::neg);
    if (s.n_pos == 0 || s.n_neg == 0) {
        throw std::invalid_argument("class_summary: both classes must be non-empty");
    }
    s.median_pos.resize(p);
    s.median_neg.resize(p);
    s.median_all.resize(p);
    s.mad_pos.resize(p);
    s.mad_neg.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        const std::vector<double> vp = train.gene_values(j, Label::pos);
        const std::vector<double> vn = train.gene_values(j, Label::neg);
        s.median_pos[j] = median(vp);
        s.median_neg[j] = median(vn);
        s.median_all[j] = median(train.gene_values(j));
        s.mad_pos[j] = mean_abs_deviation(vp, s.median_pos[j]);
        s.mad_neg[j] = mean_abs_deviation(vn, s.median_neg[j]);
    }
    return s;
}

std::vector<double> rfish_values(const ClassSummary& s, bool balanced) {
    const std::size_t p = s.median_pos.size();
    const double wp = balanced ? 1.0 : static_cast<double>(s.n_pos);
    const double wn = balanced ? 1.0 : static_cast<double>(s.n_neg);
    std::vector<double> psi(p);
    for (std::size_t j = 0; j < p; ++j) {
        const double num =
            wp * std::abs(s.median_pos[j] - s.median_all[j]) +
            wn * std::abs(s.median_neg[j] - s.median_all[j]);
        const double den = wp * s.mad_pos[j] + wn * s.mad_neg[j];
        if (den > 0.0) {
            psi[j] = num / den;
        } else {
            psi[j] = num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        }
    }
    return psi;
}

RankedGenes rfish_scores(const ClassSummary& summary, bool balanced) {
    return ranked_from_scores(rfish_values(summary, balanced));
}

} // namespace rowsu
