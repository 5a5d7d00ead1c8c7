#pragma once

#include <cstddef>
#include <vector>

namespace rowsu {

double mean(const std::vector<double>& v);

/// Unbiased sample variance (n-1 divisor); 0 for fewer than two values.
double sample_variance(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);

/// Population variance (n divisor).
double population_variance(const std::vector<double>& v);

/// Linear-interpolation quantile between order statistics at position
/// 1 + (n-1)q, the "type 7" rule. q in [0, 1]; v need not be sorted.
double quantile_type7(std::vector<double> v, double q);

/// Middle order statistic; mean of the two central values for even counts.
double median(std::vector<double> v);

/// Mean absolute deviation of v about the given center.
double mean_abs_deviation(const std::vector<double>& v, double center);

} // namespace rowsu
