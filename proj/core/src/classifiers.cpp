#include "rowsu/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rowsu/rng.hpp"

namespace rowsu {

KnnModel::KnnModel(Matrix train, std::vector<Label> labels, std::size_t k)
    : train_(std::move(train)), labels_(std::move(labels)), k_(k) {
    if (train_.rows == 0) {
        throw std::invalid_argument("KnnModel: empty training set");
    }
    if (labels_.size() != train_.rows) {
        throw std::invalid_argument("KnnModel: label count does not match row count");
    }
    if (k_ < 1 || k_ > train_.rows) {
        throw std::invalid_argument("KnnModel: k must lie in [1, n_train]");
    }
}

Label KnnModel::predict(const std::vector<double>& x) const {
    if (x.size() != train_.cols) {
        throw std::invalid_argument("KnnModel::predict: dimension mismatch");
    }
    return predict(x.data());
}

Label KnnModel::predict(const double* x) const {
    std::vector<std::pair<double, std::size_t>> dist(train_.rows);
    for (std::size_t i = 0; i < train_.rows; ++i) {
        const double* row = train_.row(i);
        double d = 0.0;
        for (std::size_t j = 0; j < train_.cols; ++j) {
            const double diff = row[j] - x[j];
            d += diff * diff;
        }
        dist[i] = {d, i};
    }
    // (distance, index) order makes the k-th-slot tie rule explicit.
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end());
    std::size_t pos_votes = 0;
    for (std::size_t r = 0; r < k_; ++r) {
        if (labels_[dist[r].second] == Label::pos) {
            ++pos_votes;
        }
    }
    return 2 * pos_votes > k_ ? Label::pos : Label::neg;
}

namespace {

struct ForestBuilderImpl {
    const Matrix& x;
    const std::vector<Label>& y;
    std::size_t mtry;
    std::size_t min_leaf;

    std::vector<ForestModel::Node>* nodes = nullptr;

    double gini(std::size_t n_pos, std::size_t n_total) const {
        if (n_total == 0) {
            return 0.0;
        }
        const double fp = static_cast<double>(n_pos) / static_cast<double>(n_total);
        return 2.0 * fp * (1.0 - fp);
    }

    Label majority(const std::vector<std::size_t>& rows) const {
        std::size_t pos = 0;
        for (std::size_t i : rows) {
            if (y[i] == Label::pos) {
                ++pos;
            }
        }
        return 2 * pos > rows.size() ? Label::pos : Label::neg;
    }

    std::int32_t grow(std::vector<std::size_t>& rows, Rng& rng) {
        ForestModel::Node node;
        std::size_t pos = 0;
        for (std::size_t i : rows) {
            if (y[i] == Label::pos) {
                ++pos;
            }
        }
        const bool pure = pos == 0 || pos == rows.size();
        if (pure || rows.size() < 2 * min_leaf || rows.size() < 2) {
            node.leaf_label = majority(rows);
            nodes->push_back(node);
            return static_cast<std::int32_t>(nodes->size() - 1);
        }

        // Random feature subset, then the Gini-optimal threshold among
        // midpoints of consecutive distinct values.
        std::vector<std::size_t> features = rng.sample_without_replacement(x.cols, mtry);
        std::sort(features.begin(), features.end());

        double best_impurity = std::numeric_limits<double>::infinity();
        std::size_t best_feature = SIZE_MAX;
        double best_threshold = 0.0;

        std::vector<std::pair<double, Label>> vals(rows.size());
        for (std::size_t f : features) {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                vals[r] = {x.at(rows[r], f), y[rows[r]]};
            }
            std::sort(vals.begin(), vals.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            std::size_t left_n = 0;
            std::size_t left_pos = 0;
            const std::size_t total_pos = pos;
            for (std::size_t r = 0; r + 1 < vals.size(); ++r) {
                ++left_n;
                if (vals[r].second == Label::pos) {
                    ++left_pos;
                }
                if (vals[r].first == vals[r + 1].first) {
                    continue;
                }
                const std::size_t right_n = vals.size() - left_n;
                if (left_n < min_leaf || right_n < min_leaf) {
                    continue;
                }
                const double impurity =
                    static_cast<double>(left_n) * gini(left_pos, left_n) +
                    static_cast<double>(right_n) * gini(total_pos - left_pos, right_n);
                if (impurity < best_impurity) {
                    best_impurity = impurity;
                    best_feature = f;
                    best_threshold = 0.5 * (vals[r].first + vals[r + 1].first);
                }
            }
        }

        if (best_feature == SIZE_MAX) {
            node.leaf_label = majority(rows);
            nodes->push_back(node);
            return static_cast<std::int32_t>(nodes->size() - 1);
        }

        std::vector<std::size_t> left_rows;
        std::vector<std::size_t> right_rows;
        for (std::size_t i : rows) {
            (x.at(i, best_feature) <= best_threshold ? left_rows : right_rows).push_back(i);
        }
        if (left_rows.empty() || right_rows.empty()) {
            node.leaf_label = majority(rows);
            nodes->push_back(node);
            return static_cast<std::int32_t>(nodes->size() - 1);
        }

        node.feature = best_feature;
        node.threshold = best_threshold;
        nodes->push_back(node);
        const std::size_t self = nodes->size() - 1;
        const std::int32_t left = grow(left_rows, rng);
        const std::int32_t right = grow(right_rows, rng);
        (*nodes)[self].left = left;
        (*nodes)[self].right = right;
        return static_cast<std::int32_t>(self);
    }
};

} // namespace

ForestModel ForestModel::fit(const Matrix& train, const std::vector<Label>& labels,
                             const ForestConfig& cfg) {
    if (train.rows == 0 || train.cols == 0) {
        throw std::invalid_argument("ForestModel::fit: empty training matrix");
    }
    if (labels.size() != train.rows) {
        throw std::invalid_argument("ForestModel::fit: label count does not match row count");
    }
    bool has_pos = false;
    bool has_neg = false;
    for (Label l : labels) {
        (l == Label::pos ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) {
        throw std::invalid_argument("ForestModel::fit: both classes must be present");
    }
    if (cfg.n_trees == 0) {
        throw std::invalid_argument("ForestModel::fit: need at least one tree");
    }

    const std::size_t mtry =
        cfg.mtry > 0 ? std::min(cfg.mtry, train.cols)
                     : static_cast<std::size_t>(
                           std::ceil(std::sqrt(static_cast<double>(train.cols))));

    ForestModel model;
    model.trees_.resize(cfg.n_trees);
    for (std::size_t t = 0; t < cfg.n_trees; ++t) {
        Rng rng(derive_seed(cfg.seed, {0xf03e, t}));
        Tree& tree = model.trees_[t];
        tree.in_bag_count.assign(train.rows, 0);
        std::vector<std::size_t> rows(train.rows);
        for (auto& r : rows) {
            r = rng.next_index(train.rows);
            ++tree.in_bag_count[r];
        }
        ForestBuilderImpl builder{train, labels, mtry, std::max<std::size_t>(1, cfg.min_leaf)};
        builder.nodes = &tree.nodes;
        builder.grow(rows, rng);
    }
    return model;
}

Label ForestModel::predict_tree(const Tree& t, const double* x) const {
    std::size_t idx = 0;
    while (t.nodes[idx].feature != SIZE_MAX) {
        idx = static_cast<std::size_t>(x[t.nodes[idx].feature] <= t.nodes[idx].threshold
                                           ? t.nodes[idx].left
                                           : t.nodes[idx].right);
    }
    return t.nodes[idx].leaf_label;
}

Label ForestModel::predict(const std::vector<double>& x) const {
    return predict(x.data());
}

Label ForestModel::predict(const double* x) const {
    std::size_t pos_votes = 0;
    for (const Tree& t : trees_) {
        if (predict_tree(t, x) == Label::pos) {
            ++pos_votes;
        }
    }
    return 2 * pos_votes > trees_.size() ? Label::pos : Label::neg;
}

double ForestModel::oob_accuracy(const Matrix& train, const std::vector<Label>& labels) const {
    std::size_t scored = 0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < train.rows; ++i) {
        std::size_t pos_votes = 0;
        std::size_t votes = 0;
        for (const Tree& t : trees_) {
            if (t.in_bag_count[i] == 0) {
                ++votes;
                if (predict_tree(t, train.row(i)) == Label::pos) {
                    ++pos_votes;
                }
            }
        }
        if (votes == 0) {
            continue;
        }
        const Label pred = 2 * pos_votes > votes ? Label::pos : Label::neg;
        ++scored;
        if (pred == labels[i]) {
            ++correct;
        }
    }
    if (scored == 0) {
        throw std::runtime_error("oob_accuracy: no out-of-bag samples");
    }
    return static_cast<double>(correct) / static_cast<double>(scored);
}

} // namespace rowsu
