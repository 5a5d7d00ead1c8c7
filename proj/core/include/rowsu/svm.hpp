#pragma once

#include <cstdint>
#include <vector>

#include "rowsu/types.hpp"

namespace rowsu {

struct SvmConfig {
    double C = 1.0;
    double tolerance = 1e-3;
    /// Cap on outer optimization sweeps; exceeding it returns the best
    /// iterate with converged = false.
    std::size_t max_passes = 10000;
    std::uint64_t seed = 0;
    /// Z-score features on the training data before solving. The hand-
    /// checkable toy cases turn this off.
    bool standardize = true;
};

/// Trained linear soft-margin SVM. Weights live in the solve space (the
/// standardized space when standardize was on), which is the scale the
/// robust weighted score consumes; weights_original_scale() maps them back.
struct SvmModel {
    std::vector<double> w; // solve-space weights, one per feature
    double b = 0.0;
    std::vector<double> alphas;          // dual coefficients, one per sample
    std::vector<double> train_targets;   // +1 / -1 per training sample
    Matrix train_points;                 // solve-space training matrix
    double C = 1.0;
    double tolerance = 1e-3;
    bool converged = true;
    bool standardized = false;
    std::vector<double> feature_mean; // identity transform when !standardized
    std::vector<double> feature_sd;   // 0 marks a dropped constant feature

    /// w^T x + b for a raw-space sample.
    double decision(const std::vector<double>& x) const;

    /// Equivalent weights on the raw feature scale (w_j / sd_j).
    std::vector<double> weights_original_scale() const;

    double weight_norm() const;
};

/// Trains on the dataset's full gene set with labels mapped neg -> -1,
/// pos -> +1. Zero-variance features are excluded from the solve and get
/// w = 0. Deterministic for a fixed seed. Throws on single-class input.
SvmModel train_linear_svm(const Dataset& train, const SvmConfig& cfg);

/// Matrix-level entry point used by the pipeline (rows = samples in solve
/// order, targets in {-1, +1}).
SvmModel train_linear_svm(const Matrix& x, const std::vector<double>& targets,
                          const SvmConfig& cfg);

/// Distance |w^T x + b| / ||w||_2 from a raw-space sample to the trained
/// hyperplane. Throws if ||w|| is zero.
double margin_distance(const SvmModel& model, const std::vector<double>& x);

} // namespace rowsu
