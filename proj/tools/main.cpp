#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rowsu/baselines.hpp"
#include "rowsu/dataset.hpp"
#include "rowsu/eval.hpp"
#include "rowsu/rowsu.hpp"

namespace {

struct RowsuFlags {
    std::size_t subsample_size = 0; // 0 -> default
    std::size_t min_subset_cap = 0; // 0 -> natural stop
    double svm_c = 1.0;
    double svm_tol = 1e-3;
};

rowsu::RowsuConfig to_config(const RowsuFlags& f, std::size_t p_star, std::uint64_t seed) {
    rowsu::RowsuConfig cfg;
    if (f.subsample_size > 0) {
        cfg.balance.subsample_size = f.subsample_size;
    }
    if (f.min_subset_cap > 0) {
        cfg.min_subset_cap = f.min_subset_cap;
    }
    cfg.final_total = p_star;
    cfg.svm_c = f.svm_c;
    cfg.svm_tolerance = f.svm_tol;
    cfg.seed = seed;
    return cfg;
}

std::string fmt_score(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::pair<int, int> parse_ratio(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw CLI::ValidationError("--ratio", "expected maj:min, e.g. 4:1");
    }
    try {
        const int maj = std::stoi(text.substr(0, colon));
        const int min = std::stoi(text.substr(colon + 1));
        return {maj, min};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--ratio", "expected maj:min, e.g. 4:1");
    }
}

int run_select(const std::string& input, const std::string& label_column,
               const std::string& positive, const std::string& method, std::size_t p_star,
               double train_fraction, std::uint64_t seed, const RowsuFlags& flags,
               const std::string& out_path) {
    const auto m = rowsu::method_from_name(method);
    if (!m) {
        std::cerr << "unknown method '" << method
                  << "' (expected rowsu, fish, wilc, snr, pos or mrmr)\n";
        return 2;
    }
    rowsu::Dataset data = rowsu::load_csv(input, label_column, positive);
    if (p_star == 0 || p_star > data.n_genes()) {
        std::cerr << "--p-star must lie in [1, " << data.n_genes() << "]\n";
        return 1;
    }

    rowsu::Dataset train = std::move(data);
    if (train_fraction > 0.0) {
        rowsu::SplitSpec spec;
        spec.train_fraction = train_fraction;
        spec.seed = seed;
        train = rowsu::stratified_split(train, spec).train;
    }

    rowsu::RankedGenes ranked;
    switch (*m) {
        case rowsu::Method::rowsu:
            ranked = rowsu::rowsu_select(train, to_config(flags, p_star, seed));
            break;
        case rowsu::Method::fish: ranked = rowsu::fisher_rank(train); break;
        case rowsu::Method::wilc: ranked = rowsu::wilcoxon_rank(train); break;
        case rowsu::Method::snr: ranked = rowsu::snr_rank(train); break;
        case rowsu::Method::pos: ranked = rowsu::pos_rank(train); break;
        case rowsu::Method::mrmr: ranked = rowsu::mrmr_rank(train, p_star); break;
    }

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 1;
    }
    out << "rank,gene_name,score\n";
    const std::size_t keep = std::min(p_star, ranked.genes.size());
    for (std::size_t r = 0; r < keep; ++r) {
        out << (r + 1) << ',' << train.gene_name(ranked.genes[r]) << ','
            << fmt_score(ranked.scores[r]) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ROWSU feature selection for imbalanced binary expression data"};
    app.require_subcommand(1);

    // select
    std::string sel_input, sel_out;
    std::string sel_label = "class";
    std::string sel_positive = "pos";
    std::string sel_method = "rowsu";
    std::size_t sel_pstar = 20;
    double sel_fraction = 0.0;
    std::uint64_t sel_seed = 0;
    RowsuFlags sel_flags;
    auto* select = app.add_subcommand("select", "Rank genes and write the top p* to CSV");
    select->add_option("--input", sel_input, "input expression CSV")->required();
    select->add_option("--label-column", sel_label, "label column name");
    select->add_option("--positive", sel_positive, "label value of the positive class");
    select->add_option("--method", sel_method, "rowsu|fish|wilc|snr|pos|mrmr");
    select->add_option("--p-star", sel_pstar, "number of genes to select");
    select->add_option("--train-fraction", sel_fraction,
                       "rank on a stratified training split instead of the full input");
    select->add_option("--seed", sel_seed, "random seed");
    select->add_option("--subsample-size", sel_flags.subsample_size,
                       "balancer sub-sample size n' (0 = auto)");
    select->add_option("--min-subset-cap", sel_flags.min_subset_cap,
                       "cap on the greedy minimum subset (0 = natural stop)");
    select->add_option("--svm-c", sel_flags.svm_c, "SVM regularization C");
    select->add_option("--svm-tol", sel_flags.svm_tol, "SVM KKT tolerance");
    select->add_option("--out", sel_out, "output CSV path")->required();

    // evaluate
    std::string ev_input, ev_outdir;
    std::string ev_label = "class";
    std::string ev_positive = "pos";
    std::size_t ev_repeats = 500;
    double ev_fraction = 0.8;
    std::string ev_ratio = "4:1";
    std::vector<std::size_t> ev_pgrid{5, 10, 15, 20, 25, 30};
    std::string ev_methods = "rowsu,fish,wilc,snr,pos,mrmr";
    std::string ev_classifiers = "knn,rf";
    std::size_t ev_knn_k = 5;
    std::size_t ev_rf_trees = 500;
    std::uint64_t ev_seed = 0;
    std::size_t ev_jobs = 1;
    RowsuFlags ev_flags;
    auto* evaluate = app.add_subcommand("evaluate", "Repeated-holdout benchmark over rankers");
    evaluate->add_option("--input", ev_input, "input expression CSV")->required();
    evaluate->add_option("--label-column", ev_label, "label column name");
    evaluate->add_option("--positive", ev_positive, "label value of the positive class");
    evaluate->add_option("--repeats", ev_repeats, "number of random splits");
    evaluate->add_option("--train-fraction", ev_fraction, "training fraction per split");
    evaluate->add_option("--ratio", ev_ratio, "imbalance ratio maj:min, or 'none'");
    evaluate->add_option("--p-grid", ev_pgrid, "comma-separated p* grid")->delimiter(',');
    evaluate->add_option("--methods", ev_methods, "comma-separated ranker list");
    evaluate->add_option("--classifiers", ev_classifiers, "comma-separated: knn,rf");
    evaluate->add_option("--knn-k", ev_knn_k, "k for the kNN classifier");
    evaluate->add_option("--rf-trees", ev_rf_trees, "trees in the random forest");
    evaluate->add_option("--seed", ev_seed, "random seed");
    evaluate->add_option("--jobs", ev_jobs, "concurrent repeats");
    evaluate->add_option("--subsample-size", ev_flags.subsample_size,
                         "balancer sub-sample size n' (0 = auto)");
    evaluate->add_option("--min-subset-cap", ev_flags.min_subset_cap,
                         "cap on the greedy minimum subset (0 = natural stop)");
    evaluate->add_option("--svm-c", ev_flags.svm_c, "SVM regularization C");
    evaluate->add_option("--svm-tol", ev_flags.svm_tol, "SVM KKT tolerance");
    evaluate->add_option("--out-dir", ev_outdir, "output directory")->required();

    // synth
    rowsu::SynthSpec synth_spec;
    std::string synth_out;
    std::string synth_planted;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic benchmark dataset");
    synth->add_option("--n-neg", synth_spec.n_neg, "negative (majority) samples");
    synth->add_option("--n-pos", synth_spec.n_pos, "positive (minority) samples");
    synth->add_option("--p", synth_spec.n_genes, "total genes");
    synth->add_option("--informative", synth_spec.n_informative, "planted informative genes");
    synth->add_option("--shift", synth_spec.shift, "class mean separation in unit scales");
    synth->add_option("--outlier-rate", synth_spec.outlier_rate, "per-cell gross outlier rate");
    synth->add_option("--seed", synth_spec.seed, "random seed");
    synth->add_option("--out", synth_out, "output CSV path")->required();
    synth->add_option("--planted-out", synth_planted,
                      "planted gene list path (default: <out>.planted.txt)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (select->parsed()) {
            return run_select(sel_input, sel_label, sel_positive, sel_method, sel_pstar,
                              sel_fraction, sel_seed, sel_flags, sel_out);
        }
        if (evaluate->parsed()) {
            rowsu::EvalConfig cfg;
            cfg.repeats = ev_repeats;
            cfg.train_fraction = ev_fraction;
            if (ev_ratio == "none") {
                cfg.enforce_ratio = false;
            } else {
                cfg.imbalance_ratio = parse_ratio(ev_ratio);
            }
            cfg.p_grid = ev_pgrid;
            cfg.rankers.clear();
            {
                std::stringstream ss(ev_methods);
                std::string name;
                while (std::getline(ss, name, ',')) {
                    const auto m = rowsu::method_from_name(name);
                    if (!m) {
                        std::cerr << "unknown method '" << name << "'\n";
                        return 2;
                    }
                    cfg.rankers.push_back(*m);
                }
            }
            {
                std::stringstream ss(ev_classifiers);
                std::string name;
                while (std::getline(ss, name, ',')) {
                    if (name == "knn") {
                        cfg.classifiers.push_back(rowsu::make_knn_classifier(ev_knn_k));
                    } else if (name == "rf") {
                        cfg.classifiers.push_back(rowsu::make_forest_classifier(ev_rf_trees));
                    } else {
                        std::cerr << "unknown classifier '" << name << "' (expected knn or rf)\n";
                        return 2;
                    }
                }
            }
            cfg.knn_k = ev_knn_k;
            cfg.rf_trees = ev_rf_trees;
            cfg.rowsu = to_config(ev_flags, 0, 0); // p*/seed are set per repeat
            cfg.seed = ev_seed;
            cfg.jobs = ev_jobs;
            cfg.dataset_name = std::filesystem::path(ev_input).stem().string();

            rowsu::Dataset data = rowsu::load_csv(ev_input, ev_label, ev_positive);
            rowsu::EvalReport report = rowsu::run_eval(data, cfg);

            std::filesystem::create_directories(ev_outdir);
            const std::filesystem::path dir(ev_outdir);
            rowsu::write_raw_csv(report, (dir / "results_raw.csv").string());
            rowsu::write_aggregate_csv(report, (dir / "results_aggregate.csv").string());
            rowsu::write_stability_csv(report, (dir / "results_stability.csv").string());
            std::cout << "wrote results_raw.csv, results_aggregate.csv, results_stability.csv to "
                      << ev_outdir << "\n";
            return 0;
        }
        if (synth->parsed()) {
            rowsu::SynthResult result = rowsu::synth_generate(synth_spec);
            rowsu::save_csv(result.data, synth_out);
            const std::string planted_path =
                synth_planted.empty() ? synth_out + ".planted.txt" : synth_planted;
            std::ofstream planted(planted_path);
            if (!planted) {
                std::cerr << "cannot write " << planted_path << "\n";
                return 1;
            }
            for (std::size_t g : result.planted) {
                planted << result.data.gene_name(g) << '\n';
            }
            std::cout << "wrote " << result.data.n_samples() << " samples x "
                      << result.data.n_genes() << " genes to " << synth_out << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
