#pragma once

#include <cstdint>
#include <optional>

#include "rowsu/types.hpp"

namespace rowsu {

struct BalanceConfig {
    /// Sub-sample size n'. Unset -> max(2, ceil(n_pos / 5)).
    std::optional<std::size_t> subsample_size;
    std::uint64_t seed = 0;
    /// Membership within one draw is without replacement by default; the
    /// draws themselves are always independent.
    bool with_replacement = false;
};

struct BalanceResult {
    Dataset data;
    /// True when the input already had equal class counts and was returned
    /// unchanged.
    bool already_balanced = false;
};

/// Equalizes class counts by appending m = n_neg - n_pos synthetic positive
/// rows, each the per-gene mean of an independently drawn sub-sample of the
/// positive class. The first n rows of the output are the input rows,
/// untouched. Requires n_pos >= 2 and n_pos <= n_neg; equal counts return
/// the input with the already_balanced flag set.
BalanceResult balance(const Dataset& train, const BalanceConfig& cfg);

} // namespace rowsu
