#include "rowsu/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rowsu/mask_greedy.hpp"
#include "rowsu/stats.hpp"

namespace rowsu {

namespace {

void require_two_classes(const Dataset& train, std::size_t min_per_class) {
    for (Label l : {Label::neg, Label::pos}) {
        if (train.count(l) < min_per_class) {
            throw std::invalid_argument(std::string("ranker: class ") + label_name(l) +
                                        " needs at least " + std::to_string(min_per_class) +
                                        " samples");
        }
    }
}

} // namespace

std::vector<double> fisher_values(const Dataset& train) {
    require_two_classes(train, 2);
    const std::size_t p = train.n_genes();
    const double n_pos = static_cast<double>(train.count(Label::pos));
    const double n_neg = static_cast<double>(train.count(Label::neg));
    std::vector<double> out(p);
    for (std::size_t j = 0; j < p; ++j) {
        const std::vector<double> vp = train.gene_values(j, Label::pos);
        const std::vector<double> vn = train.gene_values(j, Label::neg);
        const std::vector<double> all = train.gene_values(j);
        const double mp = mean(vp);
        const double mn = mean(vn);
        const double m = mean(all);
        const double num = n_pos * (mp - m) * (mp - m) + n_neg * (mn - m) * (mn - m);
        const double den = n_pos * sample_variance(vp) + n_neg * sample_variance(vn);
        if (den > 0.0) {
            out[j] = num / den;
        } else {
            out[j] = num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        }
    }
    return out;
}

RankedGenes fisher_rank(const Dataset& train) {
    return ranked_from_scores(fisher_values(train));
}

std::vector<double> wilcoxon_values(const Dataset& train) {
    require_two_classes(train, 1);
    const std::size_t n = train.n_samples();
    const std::size_t p = train.n_genes();
    const double n_pos = static_cast<double>(train.count(Label::pos));
    const double n_neg = static_cast<double>(train.count(Label::neg));
    const double nn = static_cast<double>(n);

    std::vector<double> out(p);
    std::vector<std::size_t> order(n);
    std::vector<double> ranks(n);
    for (std::size_t j = 0; j < p; ++j) {
        const std::vector<double> v = train.gene_values(j);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });

        // Midranks and the tie-correction term sum(t^3 - t).
        double tie_term = 0.0;
        std::size_t i = 0;
        while (i < n) {
            std::size_t k = i;
            while (k + 1 < n && v[order[k + 1]] == v[order[i]]) {
                ++k;
            }
            const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(k + 1));
            for (std::size_t t = i; t <= k; ++t) {
                ranks[order[t]] = midrank;
            }
            const double tie = static_cast<double>(k - i + 1);
            tie_term += tie * tie * tie - tie;
            i = k + 1;
        }

        double w = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            if (train.label(s) == Label::pos) {
                w += ranks[s];
            }
        }
        const double expected = n_pos * (nn + 1.0) / 2.0;
        const double variance =
            (n_pos * n_neg / 12.0) * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
        out[j] = variance > 0.0 ? std::abs(w - expected) / std::sqrt(variance) : 0.0;
    }
    return out;
}

RankedGenes wilcoxon_rank(const Dataset& train) {
    return ranked_from_scores(wilcoxon_values(train));
}

std::vector<double> snr_values(const Dataset& train) {
    require_two_classes(train, 2);
    const std::size_t p = train.n_genes();
    std::vector<double> out(p);
    for (std::size_t j = 0; j < p; ++j) {
        const std::vector<double> vp = train.gene_values(j, Label::pos);
        const std::vector<double> vn = train.gene_values(j, Label::neg);
        const double num = std::abs(mean(vp) - mean(vn));
        const double den = sample_sd(vp) + sample_sd(vn);
        if (den > 0.0) {
            out[j] = num / den;
        } else {
            out[j] = num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        }
    }
    return out;
}

RankedGenes snr_rank(const Dataset& train) {
    return ranked_from_scores(snr_values(train));
}

RankedGenes pos_rank(const Dataset& train) {
    const CoreIntervals iv = core_intervals(train);
    const std::vector<BitMask> masks = gene_masks(train, iv);
    const PosScores scores = pos_scores(train, iv);
    const std::vector<std::size_t> subset = greedy_min_subset(masks, scores, 0);

    std::vector<bool> in_subset(train.n_genes(), false);
    for (std::size_t g : subset) {
        in_subset[g] = true;
    }
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < train.n_genes(); ++j) {
        if (!in_subset[j]) {
            rest.push_back(j);
        }
    }
    std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
        if (scores.pos[a] != scores.pos[b]) {
            return scores.pos[a] < scores.pos[b];
        }
        return a < b;
    });

    RankedGenes out;
    out.genes = subset;
    out.genes.insert(out.genes.end(), rest.begin(), rest.end());
    out.scores.reserve(train.n_genes());
    for (std::size_t g : out.genes) {
        out.scores.push_back(scores.pos[g]);
    }
    return out;
}

namespace {

/// 3-bin discretization with cuts at mean - sd and mean + sd.
std::vector<int> discretize_gene(const std::vector<double>& v) {
    const double m = mean(v);
    const double sd = sample_sd(v);
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < m - sd) {
            out[i] = 0;
        } else if (v[i] > m + sd) {
            out[i] = 2;
        } else {
            out[i] = 1;
        }
    }
    return out;
}

double mutual_information(const std::vector<int>& a, int a_card, const std::vector<int>& b,
                          int b_card) {
    const double n = static_cast<double>(a.size());
    std::vector<double> joint(static_cast<std::size_t>(a_card * b_card), 0.0);
    std::vector<double> pa(static_cast<std::size_t>(a_card), 0.0);
    std::vector<double> pb(static_cast<std::size_t>(b_card), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[static_cast<std::size_t>(a[i] * b_card + b[i])] += 1.0;
        pa[static_cast<std::size_t>(a[i])] += 1.0;
        pb[static_cast<std::size_t>(b[i])] += 1.0;
    }
    double mi = 0.0;
    for (int x = 0; x < a_card; ++x) {
        for (int y = 0; y < b_card; ++y) {
            const double pxy = joint[static_cast<std::size_t>(x * b_card + y)] / n;
            if (pxy > 0.0) {
                mi += pxy * std::log2(pxy * n * n / (pa[static_cast<std::size_t>(x)] *
                                                     pb[static_cast<std::size_t>(y)]));
            }
        }
    }
    return mi;
}

} // namespace

RankedGenes mrmr_rank(const Dataset& train, std::size_t k) {
    require_two_classes(train, 1);
    const std::size_t p = train.n_genes();
    if (k > p) {
        throw std::invalid_argument("mrmr_rank: k exceeds gene count");
    }

    std::vector<std::vector<int>> bins(p);
    for (std::size_t j = 0; j < p; ++j) {
        bins[j] = discretize_gene(train.gene_values(j));
    }
    std::vector<int> label_bins(train.n_samples());
    for (std::size_t i = 0; i < train.n_samples(); ++i) {
        label_bins[i] = train.label(i) == Label::pos ? 1 : 0;
    }

    std::vector<double> relevance(p);
    for (std::size_t j = 0; j < p; ++j) {
        relevance[j] = mutual_information(bins[j], 3, label_bins, 2);
    }

    std::vector<bool> taken(p, false);
    std::vector<double> redundancy_sum(p, 0.0);
    RankedGenes out;
    out.genes.reserve(p);
    out.scores.reserve(p);
    for (std::size_t step = 0; step < k; ++step) {
        std::size_t best = p;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < p; ++j) {
            if (taken[j]) {
                continue;
            }
            const double penalty =
                step == 0 ? 0.0 : redundancy_sum[j] / static_cast<double>(step);
            const double score = relevance[j] - penalty;
            if (score > best_score) {
                best_score = score;
                best = j;
            }
        }
        taken[best] = true;
        out.genes.push_back(best);
        out.scores.push_back(best_score);
        for (std::size_t j = 0; j < p; ++j) {
            if (!taken[j]) {
                redundancy_sum[j] += mutual_information(bins[j], 3, bins[best], 3);
            }
        }
    }

    // Remaining genes by descending relevance so the ordering covers all p.
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < p; ++j) {
        if (!taken[j]) {
            rest.push_back(j);
        }
    }
    std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
        if (relevance[a] != relevance[b]) {
            return relevance[a] > relevance[b];
        }
        return a < b;
    });
    for (std::size_t g : rest) {
        out.genes.push_back(g);
        out.scores.push_back(relevance[g]);
    }
    return out;
}

} // namespace rowsu
