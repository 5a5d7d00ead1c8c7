#include "rowsu/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "rowsu/baselines.hpp"
#include "rowsu/classifiers.hpp"
#include "rowsu/dataset.hpp"
#include "rowsu/rng.hpp"

namespace rowsu {

const char* method_name(Method m) {
    switch (m) {
        case Method::rowsu: return "rowsu";
        case Method::fish: return "fish";
        case Method::wilc: return "wilc";
        case Method::snr: return "snr";
        case Method::pos: return "pos";
        case Method::mrmr: return "mrmr";
    }
    return "?";
}

std::optional<Method> method_from_name(const std::string& name) {
    for (Method m : {Method::rowsu, Method::fish, Method::wilc, Method::snr, Method::pos,
                     Method::mrmr}) {
        if (name == method_name(m)) {
            return m;
        }
    }
    return std::nullopt;
}

ClassifierSpec make_knn_classifier(std::size_t k) {
    return ClassifierSpec{
        "knn", [k](const Matrix& train_x, const std::vector<Label>& train_y, std::uint64_t) {
            // k is capped by the training size so small splits stay usable.
            auto model = std::make_shared<KnnModel>(train_x, train_y,
                                                    std::min(k, train_x.rows));
            return [model](const Matrix& test_x, const std::vector<Label>&) {
                std::vector<Label> out(test_x.rows);
                for (std::size_t i = 0; i < test_x.rows; ++i) {
                    out[i] = model->predict(test_x.row(i));
                }
                return out;
            };
        }};
}

ClassifierSpec make_forest_classifier(std::size_t n_trees) {
    return ClassifierSpec{
        "rf", [n_trees](const Matrix& train_x, const std::vector<Label>& train_y,
                        std::uint64_t stream) {
            ForestConfig cfg;
            cfg.n_trees = n_trees;
            cfg.seed = stream;
            auto model = std::make_shared<ForestModel>(ForestModel::fit(train_x, train_y, cfg));
            return [model](const Matrix& test_x, const std::vector<Label>&) {
                std::vector<Label> out(test_x.rows);
                for (std::size_t i = 0; i < test_x.rows; ++i) {
                    out[i] = model->predict(test_x.row(i));
                }
                return out;
            };
        }};
}

BinaryMetrics binary_metrics(const std::vector<Label>& truth,
                             const std::vector<Label>& predicted) {
    if (truth.size() != predicted.size() || truth.empty()) {
        throw std::invalid_argument("binary_metrics: size mismatch or empty input");
    }
    std::size_t correct = 0;
    std::size_t tp = 0;
    std::size_t pos_total = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == predicted[i]) {
            ++correct;
        }
        if (truth[i] == Label::pos) {
            ++pos_total;
            if (predicted[i] == Label::pos) {
                ++tp;
            }
        }
    }
    BinaryMetrics m;
    m.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
    if (pos_total > 0) {
        m.sensitivity = static_cast<double>(tp) / static_cast<double>(pos_total);
        m.sensitivity_defined = true;
    }
    return m;
}

const CellResult& EvalReport::cell(std::size_t repeat, std::size_t ranker, std::size_t clf,
                                   std::size_t p_idx) const {
    const std::size_t idx =
        ((repeat * rankers.size() + ranker) * classifier_names.size() + clf) * p_grid.size() +
        p_idx;
    return cells[idx];
}

const Aggregate& EvalReport::aggregate(std::size_t ranker, std::size_t clf,
                                       std::size_t p_idx) const {
    return aggregates[(ranker * classifier_names.size() + clf) * p_grid.size() + p_idx];
}

const std::vector<std::size_t>& EvalReport::selection(std::size_t repeat, std::size_t ranker,
                                                      std::size_t p_idx) const {
    return selections[(repeat * rankers.size() + ranker) * p_grid.size() + p_idx];
}

namespace {

RankedGenes rank_with(Method m, const Dataset& train, const EvalConfig& cfg,
                      std::uint64_t repeat_seed, std::size_t max_p) {
    switch (m) {
        case Method::rowsu: {
            RowsuConfig rc = cfg.rowsu;
            rc.final_total = max_p;
            rc.seed = repeat_seed;
            return rowsu_rank_all(train, rc);
        }
        case Method::fish: return fisher_rank(train);
        case Method::wilc: return wilcoxon_rank(train);
        case Method::snr: return snr_rank(train);
        case Method::pos: return pos_rank(train);
        case Method::mrmr: return mrmr_rank(train, std::min(max_p, train.n_genes()));
    }
    throw std::logic_error("rank_with: unknown method");
}

void run_one_repeat(const Dataset& d, const EvalConfig& cfg,
                    const std::vector<ClassifierSpec>& classifiers, std::size_t repeat,
                    EvalReport& report, std::atomic<bool>& leakage_ok) {
    const std::size_t n_rankers = cfg.rankers.size();
    const std::size_t n_clf = classifiers.size();
    const std::size_t n_p = cfg.p_grid.size();
    const std::size_t max_p = *std::max_element(cfg.p_grid.begin(), cfg.p_grid.end());

    Dataset working = cfg.enforce_ratio
                          ? enforce_imbalance(d, cfg.imbalance_ratio,
                                              derive_seed(cfg.seed, {0x1a, repeat}))
                          : d;
    SplitSpec split_spec;
    split_spec.train_fraction = cfg.train_fraction;
    split_spec.seed = derive_seed(cfg.seed, {0x2b, repeat});
    SplitResult split = stratified_split(working, split_spec);

    std::shared_ptr<std::atomic<std::uint64_t>> counter;
    if (cfg.check_leakage) {
        counter = std::make_shared<std::atomic<std::uint64_t>>(0);
        split.test.attach_read_counter(counter);
    }
    std::vector<Label> test_truth(split.test.n_samples());
    for (std::size_t i = 0; i < test_truth.size(); ++i) {
        test_truth[i] = split.test.label(i);
    }
    std::vector<Label> train_labels(split.train.n_samples());
    for (std::size_t i = 0; i < train_labels.size(); ++i) {
        train_labels[i] = split.train.label(i);
    }

    for (std::size_t r = 0; r < n_rankers; ++r) {
        const std::uint64_t ranker_seed = derive_seed(cfg.seed, {0x3c, repeat, r});
        const std::uint64_t before_rank = cfg.check_leakage ? counter->load() : 0;
        const RankedGenes ranking = rank_with(cfg.rankers[r], split.train, cfg, ranker_seed, max_p);
        if (cfg.check_leakage && counter->load() != before_rank) {
            leakage_ok = false;
        }
        for (std::size_t pi = 0; pi < n_p; ++pi) {
            const std::vector<std::size_t> selected = ranking.top(cfg.p_grid[pi]);
            report.selections[(repeat * n_rankers + r) * n_p + pi] = selected;
            const Matrix train_x = reduced_matrix(split.train, selected);
            for (std::size_t c = 0; c < n_clf; ++c) {
                CellResult& cell =
                    report.cells[((repeat * n_rankers + r) * n_clf + c) * n_p + pi];
                try {
                    const std::uint64_t before_fit = cfg.check_leakage ? counter->load() : 0;
                    PredictFn predictor = classifiers[c].fit(
                        train_x, train_labels, derive_seed(cfg.seed, {0x5e, repeat, r, c, pi}));
                    if (cfg.check_leakage && counter->load() != before_fit) {
                        leakage_ok = false;
                    }
                    // Only now may test rows be read, to build the reduced
                    // test matrix for prediction.
                    const Matrix test_x = reduced_matrix(split.test, selected);
                    std::vector<Label> pred = predictor(test_x, test_truth);
                    const BinaryMetrics m = binary_metrics(test_truth, pred);
                    cell.accuracy = m.accuracy;
                    cell.sensitivity = m.sensitivity;
                    cell.sensitivity_defined = m.sensitivity_defined;
                } catch (const std::exception&) {
                    cell.failed = true;
                }
            }
        }
    }
}

} // namespace

EvalReport run_eval(const Dataset& d, const EvalConfig& cfg) {
    if (cfg.repeats < 1) {
        throw std::invalid_argument("run_eval: repeats must be >= 1");
    }
    if (cfg.p_grid.empty() || cfg.rankers.empty()) {
        throw std::invalid_argument("run_eval: p_grid and rankers must be non-empty");
    }
    for (std::size_t p : cfg.p_grid) {
        if (p == 0 || p > d.n_genes()) {
            throw std::invalid_argument("run_eval: p_grid entry " + std::to_string(p) +
                                        " outside [1, " + std::to_string(d.n_genes()) + "]");
        }
    }
    const std::size_t max_p = *std::max_element(cfg.p_grid.begin(), cfg.p_grid.end());
    if (cfg.rowsu.min_subset_cap && *cfg.rowsu.min_subset_cap > max_p &&
        std::find(cfg.rankers.begin(), cfg.rankers.end(), Method::rowsu) != cfg.rankers.end()) {
        throw std::invalid_argument("run_eval: rowsu min_subset_cap exceeds the largest p*");
    }
    std::vector<ClassifierSpec> classifiers = cfg.classifiers;
    if (classifiers.empty()) {
        classifiers.push_back(make_knn_classifier(cfg.knn_k));
        classifiers.push_back(make_forest_classifier(cfg.rf_trees));
    }

    EvalReport report;
    report.dataset_name = cfg.dataset_name;
    report.repeats = cfg.repeats;
    report.rankers = cfg.rankers;
    report.p_grid = cfg.p_grid;
    for (const auto& c : classifiers) {
        report.classifier_names.push_back(c.name);
    }
    const std::size_t n_cells =
        cfg.repeats * cfg.rankers.size() * classifiers.size() * cfg.p_grid.size();
    report.cells.assign(n_cells, CellResult{});
    report.selections.assign(cfg.repeats * cfg.rankers.size() * cfg.p_grid.size(), {});

    std::atomic<bool> leakage_ok{true};
    const std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);
    if (jobs == 1) {
        for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
            run_one_repeat(d, cfg, classifiers, rep, report, leakage_ok);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(jobs);
        for (std::size_t t = 0; t < jobs; ++t) {
            pool.emplace_back([&, t] {
                try {
                    while (true) {
                        const std::size_t rep = next.fetch_add(1);
                        if (rep >= cfg.repeats) {
                            break;
                        }
                        run_one_repeat(d, cfg, classifiers, rep, report, leakage_ok);
                    }
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
        for (auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    if (cfg.check_leakage) {
        report.leakage_checked = true;
        if (!leakage_ok.load()) {
            throw std::runtime_error("run_eval: test rows were read during selection or fitting");
        }
    }

    // Aggregates in a fixed order, independent of scheduling.
    const std::size_t n_rankers = cfg.rankers.size();
    const std::size_t n_clf = classifiers.size();
    const std::size_t n_p = cfg.p_grid.size();
    report.aggregates.assign(n_rankers * n_clf * n_p, Aggregate{});
    for (std::size_t r = 0; r < n_rankers; ++r) {
        for (std::size_t c = 0; c < n_clf; ++c) {
            for (std::size_t pi = 0; pi < n_p; ++pi) {
                Aggregate& agg = report.aggregates[(r * n_clf + c) * n_p + pi];
                double acc_sum = 0.0, sens_sum = 0.0;
                for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
                    const CellResult& cell = report.cell(rep, r, c, pi);
                    if (cell.failed) {
                        continue;
                    }
                    ++agg.n_ok;
                    acc_sum += cell.accuracy;
                    if (cell.sensitivity_defined) {
                        ++agg.n_sens;
                        sens_sum += cell.sensitivity;
                    }
                }
                if (agg.n_ok > 0) {
                    agg.accuracy_mean = acc_sum / static_cast<double>(agg.n_ok);
                }
                if (agg.n_sens > 0) {
                    agg.sensitivity_mean = sens_sum / static_cast<double>(agg.n_sens);
                }
                double acc_ss = 0.0, sens_ss = 0.0;
                for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
                    const CellResult& cell = report.cell(rep, r, c, pi);
                    if (cell.failed) {
                        continue;
                    }
                    acc_ss += (cell.accuracy - agg.accuracy_mean) *
                              (cell.accuracy - agg.accuracy_mean);
                    if (cell.sensitivity_defined) {
                        sens_ss += (cell.sensitivity - agg.sensitivity_mean) *
                                   (cell.sensitivity - agg.sensitivity_mean);
                    }
                }
                agg.accuracy_sd =
                    agg.n_ok > 1 ? std::sqrt(acc_ss / static_cast<double>(agg.n_ok - 1)) : 0.0;
                agg.sensitivity_sd =
                    agg.n_sens > 1 ? std::sqrt(sens_ss / static_cast<double>(agg.n_sens - 1))
                                   : 0.0;
            }
        }
    }
    return report;
}

std::vector<std::vector<double>> stability_matrix(const EvalReport& report) {
    const std::size_t n_rankers = report.rankers.size();
    const std::size_t n_p = report.p_grid.size();
    std::vector<std::vector<double>> out(n_rankers, std::vector<double>(n_p, 1.0));
    for (std::size_t r = 0; r < n_rankers; ++r) {
        for (std::size_t pi = 0; pi < n_p; ++pi) {
            if (report.repeats < 2) {
                continue;
            }
            double sum = 0.0;
            std::size_t pairs = 0;
            for (std::size_t a = 0; a < report.repeats; ++a) {
                const auto& sa = report.selection(a, r, pi);
                const std::set<std::size_t> set_a(sa.begin(), sa.end());
                for (std::size_t b = a + 1; b < report.repeats; ++b) {
                    const auto& sb = report.selection(b, r, pi);
                    std::size_t inter = 0;
                    for (std::size_t g : sb) {
                        if (set_a.count(g)) {
                            ++inter;
                        }
                    }
                    const std::size_t uni = set_a.size() + sb.size() - inter;
                    sum += uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
                    ++pairs;
                }
            }
            out[r][pi] = pairs > 0 ? sum / static_cast<double>(pairs) : 1.0;
        }
    }
    return out;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_raw_csv(const EvalReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    out << "dataset,ranker,classifier,p_star,repeat,accuracy,sensitivity\n";
    for (std::size_t rep = 0; rep < report.repeats; ++rep) {
        for (std::size_t r = 0; r < report.rankers.size(); ++r) {
            for (std::size_t c = 0; c < report.classifier_names.size(); ++c) {
                for (std::size_t pi = 0; pi < report.p_grid.size(); ++pi) {
                    const CellResult& cell = report.cell(rep, r, c, pi);
                    out << report.dataset_name << ',' << method_name(report.rankers[r]) << ','
                        << report.classifier_names[c] << ',' << report.p_grid[pi] << ',' << rep
                        << ',';
                    if (cell.failed) {
                        out << "NA,NA\n";
                    } else {
                        out << fmt(cell.accuracy) << ','
                            << (cell.sensitivity_defined ? fmt(cell.sensitivity) : "NA") << '\n';
                    }
                }
            }
        }
    }
}

void write_aggregate_csv(const EvalReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    out << "dataset,ranker,classifier,p_star,n_repeats,accuracy_mean,accuracy_sd,"
           "sensitivity_mean,sensitivity_sd\n";
    for (std::size_t r = 0; r < report.rankers.size(); ++r) {
        for (std::size_t c = 0; c < report.classifier_names.size(); ++c) {
            for (std::size_t pi = 0; pi < report.p_grid.size(); ++pi) {
                const Aggregate& a = report.aggregate(r, c, pi);
                out << report.dataset_name << ',' << method_name(report.rankers[r]) << ','
                    << report.classifier_names[c] << ',' << report.p_grid[pi] << ',' << a.n_ok
                    << ',' << fmt(a.accuracy_mean) << ',' << fmt(a.accuracy_sd) << ','
                    << (a.n_sens > 0 ? fmt(a.sensitivity_mean) : "NA") << ','
                    << (a.n_sens > 0 ? fmt(a.sensitivity_sd) : "NA") << '\n';
            }
        }
    }
}

void write_stability_csv(const EvalReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    const auto stab = stability_matrix(report);
    out << "dataset,ranker,p_star,mean_pairwise_jaccard\n";
    for (std::size_t r = 0; r < report.rankers.size(); ++r) {
        for (std::size_t pi = 0; pi < report.p_grid.size(); ++pi) {
            out << report.dataset_name << ',' << method_name(report.rankers[r]) << ','
                << report.p_grid[pi] << ',' << fmt(stab[r][pi]) << '\n';
        }
    }
}

} // namespace rowsu
