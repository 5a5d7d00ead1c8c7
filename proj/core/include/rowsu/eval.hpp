#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rowsu/rowsu.hpp"
#include "rowsu/types.hpp"

namespace rowsu {

enum class Method { rowsu, fish, wilc, snr, pos, mrmr };

const char* method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

/// Predictor returned by a classifier's fit stage. The true test labels are
/// passed alongside the test matrix so oracle-style stubs can be expressed;
/// real classifiers ignore them.
using PredictFn =
    std::function<std::vector<Label>(const Matrix& test_x, const std::vector<Label>& test_truth)>;

/// A pluggable classifier. The fit stage sees only training rows; the
/// harness builds the reduced test matrix after fitting, which is what lets
/// the instrumented read counters prove that fitting never touched a test
/// row. `stream` is a per-cell seed for stochastic classifiers.
struct ClassifierSpec {
    std::string name;
    std::function<PredictFn(const Matrix& train_x, const std::vector<Label>& train_y,
                            std::uint64_t stream)>
        fit;
};

ClassifierSpec make_knn_classifier(std::size_t k);
ClassifierSpec make_forest_classifier(std::size_t n_trees);

struct EvalConfig {
    std::size_t repeats = 500;
    double train_fraction = 0.8;
    /// maj:min enforced per repeat before splitting; disable to evaluate the
    /// data as-is.
    std::pair<int, int> imbalance_ratio{4, 1};
    bool enforce_ratio = true;
    std::vector<std::size_t> p_grid{5, 10, 15, 20, 25, 30};
    std::vector<Method> rankers{Method::rowsu, Method::fish, Method::wilc,
                                Method::snr,   Method::pos,  Method::mrmr};
    std::vector<ClassifierSpec> classifiers; // empty -> knn(k) and rf(trees)
    std::size_t knn_k = 5;
    std::size_t rf_trees = 500;
    RowsuConfig rowsu; // final_total and seed are set per repeat by the harness
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    /// Attach read counters to test partitions and fail the run if any test
    /// row is read during selection or fitting.
    bool check_leakage = true;
    std::string dataset_name = "data";
};

struct CellResult {
    double accuracy = 0.0;
    double sensitivity = 0.0;
    bool sensitivity_defined = false;
    bool failed = false; // classifier error on this repeat, excluded from aggregates
};

struct Aggregate {
    std::size_t n_ok = 0;
    double accuracy_mean = 0.0;
    double accuracy_sd = 0.0;
    std::size_t n_sens = 0;
    double sensitivity_mean = 0.0;
    double sensitivity_sd = 0.0;
};

struct EvalReport {
    std::string dataset_name;
    std::size_t repeats = 0;
    std::vector<Method> rankers;
    std::vector<std::string> classifier_names;
    std::vector<std::size_t> p_grid;

    /// cells[((repeat * n_rankers + ranker) * n_classifiers + clf) * n_p + p_idx]
    std::vector<CellResult> cells;
    /// selections[(repeat * n_rankers + ranker) * n_p + p_idx]
    std::vector<std::vector<std::size_t>> selections;
    /// aggregates[(ranker * n_classifiers + clf) * n_p + p_idx]
    std::vector<Aggregate> aggregates;

    bool leakage_checked = false;

    const CellResult& cell(std::size_t repeat, std::size_t ranker, std::size_t clf,
                           std::size_t p_idx) const;
    const Aggregate& aggregate(std::size_t ranker, std::size_t clf, std::size_t p_idx) const;
    const std::vector<std::size_t>& selection(std::size_t repeat, std::size_t ranker,
                                              std::size_t p_idx) const;
};

/// Confusion-matrix metrics with pos as the positive class. Sensitivity is
/// undefined (flag false) when the truth contains no positive sample.
struct BinaryMetrics {
    double accuracy = 0.0;
    double sensitivity = 0.0;
    bool sensitivity_defined = false;
};
BinaryMetrics binary_metrics(const std::vector<Label>& truth, const std::vector<Label>& predicted);

/// Repeated stratified-holdout protocol: per repeat, enforce the imbalance
/// ratio, split, rank on the training partition only, fit each classifier on
/// the top-p* training columns and score it on the test partition.
/// Deterministic for a fixed seed, independent of the job count.
EvalReport run_eval(const Dataset& d, const EvalConfig& cfg);

/// Mean pairwise Jaccard similarity of the selected gene sets across
/// repeats, per (ranker, p*); 1.0 when every repeat selects the same set.
std::vector<std::vector<double>> stability_matrix(const EvalReport& report);

/// Tidy CSV writers (raw per-repeat cells, aggregates, stability).
void write_raw_csv(const EvalReport& report, const std::string& path);
void write_aggregate_csv(const EvalReport& report, const std::string& path);
void write_stability_csv(const EvalReport& report, const std::string& path);

} // namespace rowsu
