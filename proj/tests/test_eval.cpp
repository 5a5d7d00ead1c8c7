#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rowsu/dataset.hpp"
#include "rowsu/eval.hpp"

using namespace rowsu;

namespace {

Dataset small_synth(std::uint64_t seed, std::size_t p = 60) {
    SynthSpec spec;
    spec.n_neg = 40;
    spec.n_pos = 10;
    spec.n_genes = p;
    spec.n_informative = 6;
    spec.shift = 3.0;
    spec.outlier_rate = 0.02;
    spec.seed = seed;
    return synth_generate(spec).data;
}

ClassifierSpec oracle_stub() {
    return ClassifierSpec{"oracle", [](const Matrix&, const std::vector<Label>&, std::uint64_t) {
                              return [](const Matrix&, const std::vector<Label>& truth) {
                                  return truth;
                              };
                          }};
}

ClassifierSpec constant_neg_stub() {
    return ClassifierSpec{"allneg", [](const Matrix&, const std::vector<Label>&, std::uint64_t) {
                              return [](const Matrix& test_x, const std::vector<Label>&) {
                                  return std::vector<Label>(test_x.rows, Label::neg);
                              };
                          }};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

EvalConfig base_config() {
    EvalConfig cfg;
    cfg.repeats = 3;
    cfg.p_grid = {4, 8};
    cfg.rankers = {Method::fish, Method::snr};
    cfg.seed = 11;
    return cfg;
}

} // namespace

TEST_CASE("binary_metrics computes accuracy and sensitivity") {
    std::vector<Label> truth{Label::neg, Label::neg, Label::pos, Label::pos};
    std::vector<Label> pred{Label::neg, Label::pos, Label::pos, Label::neg};
    BinaryMetrics m = binary_metrics(truth, pred);
    CHECK(m.accuracy == doctest::Approx(0.5));
    CHECK(m.sensitivity == doctest::Approx(0.5));
    CHECK(m.sensitivity_defined);

    std::vector<Label> all_neg{Label::neg, Label::neg};
    BinaryMetrics none = binary_metrics(all_neg, all_neg);
    CHECK(none.accuracy == 1.0);
    CHECK_FALSE(none.sensitivity_defined);

    CHECK_THROWS_AS(binary_metrics({}, {}), std::invalid_argument);
}

TEST_CASE("oracle stub scores 1.0 accuracy and sensitivity in every cell") {
    EvalConfig cfg = base_config();
    cfg.classifiers = {oracle_stub()};
    EvalReport report = run_eval(small_synth(1), cfg);
    for (std::size_t r = 0; r < cfg.rankers.size(); ++r) {
        for (std::size_t pi = 0; pi < cfg.p_grid.size(); ++pi) {
            const Aggregate& a = report.aggregate(r, 0, pi);
            CHECK(a.accuracy_mean == 1.0);
            CHECK(a.sensitivity_mean == 1.0);
            CHECK(a.n_ok == cfg.repeats);
        }
    }
}

TEST_CASE("constant-neg stub at a 4:1 test split scores accuracy 0.8, sensitivity 0") {
    EvalConfig cfg = base_config();
    cfg.classifiers = {constant_neg_stub()};
    // (40 neg, 10 pos): test split is exactly (8, 2) per repeat
    EvalReport report = run_eval(small_synth(2), cfg);
    for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
        for (std::size_t r = 0; r < cfg.rankers.size(); ++r) {
            for (std::size_t pi = 0; pi < cfg.p_grid.size(); ++pi) {
                const CellResult& cell = report.cell(rep, r, 0, pi);
                CHECK(cell.accuracy == doctest::Approx(0.8));
                CHECK(cell.sensitivity == 0.0);
                CHECK(cell.sensitivity_defined);
            }
        }
    }
}

TEST_CASE("run_eval is deterministic and independent of the job count") {
    EvalConfig cfg = base_config();
    cfg.rankers = {Method::rowsu, Method::snr};
    cfg.repeats = 4;
    cfg.knn_k = 3;
    cfg.rf_trees = 15;
    Dataset d = small_synth(3);

    const std::string dir = std::filesystem::temp_directory_path().string();
    auto render = [&](const EvalReport& r, const std::string& tag) {
        write_raw_csv(r, dir + "/raw_" + tag + ".csv");
        write_aggregate_csv(r, dir + "/agg_" + tag + ".csv");
        write_stability_csv(r, dir + "/stab_" + tag + ".csv");
        return slurp(dir + "/raw_" + tag + ".csv") + slurp(dir + "/agg_" + tag + ".csv") +
               slurp(dir + "/stab_" + tag + ".csv");
    };

    EvalReport a = run_eval(d, cfg);
    EvalReport b = run_eval(d, cfg);
    cfg.jobs = 3;
    EvalReport c = run_eval(d, cfg);
    CHECK(render(a, "a") == render(b, "b"));
    CHECK(render(a, "a2") == render(c, "c"));
}

TEST_CASE("leakage instrumentation passes on the honest protocol") {
    EvalConfig cfg = base_config();
    cfg.rankers = {Method::rowsu, Method::fish, Method::wilc, Method::snr, Method::pos,
                   Method::mrmr};
    cfg.repeats = 2;
    cfg.knn_k = 3;
    cfg.rf_trees = 10;
    cfg.check_leakage = true;
    EvalReport report = run_eval(small_synth(4), cfg);
    CHECK(report.leakage_checked);
}

TEST_CASE("the read counter flags any value access on an instrumented partition") {
    // classifiers only ever see reduced matrices, so the harness guarantee is
    // structural; the counter that enforces it must observe every access path
    auto counter = std::make_shared<std::atomic<std::uint64_t>>(0);
    Dataset probe = small_synth(6);
    probe.attach_read_counter(counter);
    CHECK(probe.read_count() == 0);
    (void)probe.value(0, 0);
    CHECK(probe.read_count() == 1);
    std::vector<std::size_t> one_gene{0};
    (void)reduced_matrix(probe, one_gene);
    CHECK(probe.read_count() == 1 + probe.n_samples());
    (void)probe.gene_values(1, Label::pos);
    CHECK(probe.read_count() == 1 + probe.n_samples() + probe.count(Label::pos));
}

TEST_CASE("classifier failures are recorded per cell, not fatal") {
    EvalConfig cfg = base_config();
    cfg.repeats = 2;
    cfg.classifiers = {ClassifierSpec{
        "flaky", [](const Matrix&, const std::vector<Label>&, std::uint64_t) -> PredictFn {
            throw std::runtime_error("deliberate failure");
        }}};
    EvalReport report = run_eval(small_synth(7), cfg);
    for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
        CHECK(report.cell(rep, 0, 0, 0).failed);
    }
    CHECK(report.aggregate(0, 0, 0).n_ok == 0);
}

TEST_CASE("aggregates match a direct recomputation") {
    EvalConfig cfg = base_config();
    cfg.repeats = 5;
    cfg.rankers = {Method::fish};
    cfg.knn_k = 3;
    cfg.rf_trees = 10;
    EvalReport report = run_eval(small_synth(8), cfg);
    for (std::size_t c = 0; c < report.classifier_names.size(); ++c) {
        for (std::size_t pi = 0; pi < cfg.p_grid.size(); ++pi) {
            double sum = 0.0;
            std::size_t n = 0;
            for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
                const CellResult& cell = report.cell(rep, 0, c, pi);
                if (!cell.failed) {
                    sum += cell.accuracy;
                    ++n;
                }
            }
            const Aggregate& a = report.aggregate(0, c, pi);
            REQUIRE(a.n_ok == n);
            CHECK(std::abs(a.accuracy_mean - sum / static_cast<double>(n)) < 1e-12);
            double ss = 0.0;
            for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
                const CellResult& cell = report.cell(rep, 0, c, pi);
                if (!cell.failed) {
                    ss += (cell.accuracy - a.accuracy_mean) * (cell.accuracy - a.accuracy_mean);
                }
            }
            const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
            CHECK(std::abs(a.accuracy_sd - sd) < 1e-12);
        }
    }
}

TEST_CASE("metric identity: accuracy times test size is the correct count") {
    EvalConfig cfg = base_config();
    cfg.repeats = 3;
    cfg.knn_k = 3;
    cfg.rf_trees = 10;
    EvalReport report = run_eval(small_synth(9), cfg);
    // test partition of (40,10) at 0.8 is exactly 10 samples
    for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
        for (std::size_t r = 0; r < cfg.rankers.size(); ++r) {
            for (std::size_t c = 0; c < report.classifier_names.size(); ++c) {
                for (std::size_t pi = 0; pi < cfg.p_grid.size(); ++pi) {
                    const CellResult& cell = report.cell(rep, r, c, pi);
                    const double count = cell.accuracy * 10.0;
                    CHECK(std::abs(count - std::round(count)) < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("stability matrix hand values") {
    EvalReport report;
    report.dataset_name = "hand";
    report.repeats = 2;
    report.rankers = {Method::fish};
    report.classifier_names = {"knn"};
    report.p_grid = {2};
    report.cells.assign(2, CellResult{});

    SUBCASE("identical selections give 1") {
        report.selections = {{1, 2}, {1, 2}};
        CHECK(stability_matrix(report)[0][0] == doctest::Approx(1.0));
    }
    SUBCASE("disjoint selections give 0") {
        report.selections = {{1, 2}, {3, 4}};
        CHECK(stability_matrix(report)[0][0] == doctest::Approx(0.0));
    }
    SUBCASE("sets {A,B} and {B,C} give 1/3") {
        report.selections = {{1, 2}, {2, 3}};
        CHECK(stability_matrix(report)[0][0] == doctest::Approx(1.0 / 3.0));
    }
}

TEST_CASE("run_eval validates the p grid") {
    EvalConfig cfg = base_config();
    cfg.p_grid = {4, 999};
    CHECK_THROWS_WITH_AS(run_eval(small_synth(10), cfg), doctest::Contains("999"),
                         std::invalid_argument);
}

TEST_CASE("csv writers emit the documented schemas") {
    EvalConfig cfg = base_config();
    cfg.repeats = 2;
    cfg.knn_k = 3;
    cfg.rf_trees = 8;
    cfg.dataset_name = "unit";
    EvalReport report = run_eval(small_synth(12), cfg);
    const std::string dir = std::filesystem::temp_directory_path().string();
    write_raw_csv(report, dir + "/unit_raw.csv");
    write_aggregate_csv(report, dir + "/unit_agg.csv");
    write_stability_csv(report, dir + "/unit_stab.csv");

    std::ifstream raw(dir + "/unit_raw.csv");
    std::string header;
    std::getline(raw, header);
    CHECK(header == "dataset,ranker,classifier,p_star,repeat,accuracy,sensitivity");
    std::size_t rows = 0;
    for (std::string line; std::getline(raw, line);) {
        ++rows;
    }
    CHECK(rows == cfg.repeats * cfg.rankers.size() * 2 * cfg.p_grid.size());

    std::ifstream agg(dir + "/unit_agg.csv");
    std::getline(agg, header);
    CHECK(header ==
          "dataset,ranker,classifier,p_star,n_repeats,accuracy_mean,accuracy_sd,"
          "sensitivity_mean,sensitivity_sd");
    rows = 0;
    for (std::string line; std::getline(agg, line);) {
        ++rows;
    }
    CHECK(rows == cfg.rankers.size() * 2 * cfg.p_grid.size());

    std::ifstream stab(dir + "/unit_stab.csv");
    std::getline(stab, header);
    CHECK(header == "dataset,ranker,p_star,mean_pairwise_jaccard");
}

TEST_CASE("method names round-trip") {
    for (Method m : {Method::rowsu, Method::fish, Method::wilc, Method::snr, Method::pos,
                     Method::mrmr}) {
        auto back = method_from_name(method_name(m));
        REQUIRE(back.has_value());
        CHECK(*back == m);
    }
    CHECK_FALSE(method_from_name("nope").has_value());
}
