#include <benchmark/benchmark.h>

#include "rowsu/balance.hpp"
#include "rowsu/baselines.hpp"
#include "rowsu/classifiers.hpp"
#include "rowsu/dataset.hpp"
#include "rowsu/rowsu.hpp"
#include "rowsu/svm.hpp"

namespace {

rowsu::Dataset make_data(std::size_t n_neg, std::size_t n_pos, std::size_t p) {
    rowsu::SynthSpec spec;
    spec.n_neg = n_neg;
    spec.n_pos = n_pos;
    spec.n_genes = p;
    spec.n_informative = p / 25 + 1;
    spec.shift = 3.0;
    spec.outlier_rate = 0.02;
    spec.seed = 99;
    return rowsu::synth_generate(spec).data;
}

void BM_Balance(benchmark::State& state) {
    const auto d = make_data(80, 20, static_cast<std::size_t>(state.range(0)));
    rowsu::BalanceConfig cfg;
    cfg.seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rowsu::balance(d, cfg));
    }
}
BENCHMARK(BM_Balance)->Arg(200)->Arg(1000);

void BM_FisherRank(benchmark::State& state) {
    const auto d = make_data(80, 20, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rowsu::fisher_rank(d));
    }
}
BENCHMARK(BM_FisherRank)->Arg(500)->Arg(2000);

void BM_WilcoxonRank(benchmark::State& state) {
    const auto d = make_data(80, 20, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rowsu::wilcoxon_rank(d));
    }
}
BENCHMARK(BM_WilcoxonRank)->Arg(500)->Arg(2000);

void BM_TrainSvm(benchmark::State& state) {
    const auto d = make_data(80, 20, static_cast<std::size_t>(state.range(0)));
    rowsu::SvmConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rowsu::train_linear_svm(d, cfg));
    }
}
BENCHMARK(BM_TrainSvm)->Arg(200)->Arg(500);

void BM_RowsuSelect(benchmark::State& state) {
    const auto d = make_data(80, 20, static_cast<std::size_t>(state.range(0)));
    rowsu::RowsuConfig cfg;
    cfg.final_total = 20;
    cfg.seed = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rowsu::rowsu_select(d, cfg));
    }
}
BENCHMARK(BM_RowsuSelect)->Arg(200)->Arg(500);

void BM_ForestFit(benchmark::State& state) {
    const auto d = make_data(80, 20, 30);
    std::vector<std::size_t> genes(30);
    for (std::size_t j = 0; j < genes.size(); ++j) {
        genes[j] = j;
    }
    const rowsu::Matrix x = rowsu::reduced_matrix(d, genes);
    rowsu::ForestConfig cfg;
    cfg.n_trees = static_cast<std::size_t>(state.range(0));
    cfg.seed = 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rowsu::ForestModel::fit(x, d.labels(), cfg));
    }
}
BENCHMARK(BM_ForestFit)->Arg(100)->Arg(500);

} // namespace

BENCHMARK_MAIN();
