#include "rowsu/balance.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rowsu/rng.hpp"

namespace rowsu {

BalanceResult balance(const Dataset& train, const BalanceConfig& cfg) {
    const std::size_t n_pos = train.count(Label::pos);
    const std::size_t n_neg = train.count(Label::neg);
    if (n_pos < 2) {
        throw std::invalid_argument("balance: need at least 2 positive samples, have " +
                                    std::to_string(n_pos));
    }
    if (n_pos > n_neg) {
        throw std::invalid_argument("balance: pos already exceeds neg (" + std::to_string(n_pos) +
                                    " vs " + std::to_string(n_neg) + ")");
    }
    if (n_pos == n_neg) {
        return BalanceResult{train, true};
    }

    // Default n' = ceil(n_pos / 5). Small sub-samples keep the synthetic-row
    // median robust: a gross outlier in one minority row reaches only
    // ~n'/n_pos of the draws, so the balanced class median rejects it.
    std::size_t sub = cfg.subsample_size.value_or(
        std::max<std::size_t>(2, (n_pos + 4) / 5));
    if (sub < 2 || sub > n_pos) {
        throw std::invalid_argument("balance: subsample size must lie in [2, n_pos]");
    }

    const std::vector<std::size_t> pos_rows = train.indices_of(Label::pos);
    const std::size_t p = train.n_genes();
    const std::size_t m = n_neg - n_pos;

    Dataset out = train;
    std::vector<double> row(p);
    for (std::size_t s = 0; s < m; ++s) {
        // Per-draw stream derived from (seed, s): draws are independent and
        // could run in parallel without changing the result.
        Rng rng(derive_seed(cfg.seed, {0xba1a, s}));
        std::vector<std::size_t> members;
        if (cfg.with_replacement) {
            members.resize(sub);
            for (auto& idx : members) {
                idx = rng.next_index(pos_rows.size());
            }
        } else {
            members = rng.sample_without_replacement(pos_rows.size(), sub);
        }
        for (std::size_t j = 0; j < p; ++j) {
            double acc = 0.0;
            for (std::size_t k : members) {
                acc += train.value(pos_rows[k], j);
            }
            row[j] = acc / static_cast<double>(sub);
        }
        out.append_sample(row, Label::pos, "synth" + std::to_string(s + 1));
    }
    return BalanceResult{std::move(out), false};
}

} // namespace rowsu
