#pragma once

#include <cstdint>
#include <vector>

#include "rowsu/types.hpp"

namespace rowsu {

/// Brute-force k-nearest-neighbours over a reduced training matrix.
/// Distance ties at the k-th slot go to the lower training index; vote ties
/// go to neg (the majority class).
class KnnModel {
public:
    KnnModel(Matrix train, std::vector<Label> labels, std::size_t k);

    Label predict(const std::vector<double>& x) const;
    Label predict(const double* x) const;

    std::size_t k() const { return k_; }

private:
    Matrix train_;
    std::vector<Label> labels_;
    std::size_t k_;
};

struct ForestConfig {
    std::size_t n_trees = 500;
    std::size_t min_leaf = 1;
    /// Features tried per split; 0 -> ceil(sqrt(p)).
    std::size_t mtry = 0;
    std::uint64_t seed = 0;
};

/// Random forest of Gini-split CART trees grown on bootstrap resamples.
/// Prediction is the majority vote over trees, ties toward neg.
/// Bit-deterministic for a fixed seed.
class ForestModel {
public:
    static ForestModel fit(const Matrix& train, const std::vector<Label>& labels,
                           const ForestConfig& cfg);

    Label predict(const std::vector<double>& x) const;
    Label predict(const double* x) const;

    /// Accuracy over training samples using only trees whose bootstrap
    /// missed the sample. Samples in every bag are skipped.
    double oob_accuracy(const Matrix& train, const std::vector<Label>& labels) const;

    std::size_t n_trees() const { return trees_.size(); }

    struct Node {
        // leaf when feature == SIZE_MAX
        std::size_t feature = SIZE_MAX;
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        Label leaf_label = Label::neg;
    };
    struct Tree {
        std::vector<Node> nodes;
        std::vector<std::size_t> in_bag_count; // per training sample
    };

private:
    Label predict_tree(const Tree& t, const double* x) const;

    std::vector<Tree> trees_;
};

} // namespace rowsu
