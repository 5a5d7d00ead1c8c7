#include "rowsu/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rowsu {

double mean(const std::vector<double>& v) {
    if (v.empty()) {
        throw std::invalid_argument("mean of empty vector");
    }
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) {
        return 0.0;
    }
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) {
        s += (x - m) * (x - m);
    }
    return s / static_cast<double>(v.size() - 1);
}

double sample_sd(const std::vector<double>& v) {
    return std::sqrt(sample_variance(v));
}

double population_variance(const std::vector<double>& v) {
    if (v.empty()) {
        return 0.0;
    }
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) {
        s += (x - m) * (x - m);
    }
    return s / static_cast<double>(v.size());
}

double quantile_type7(std::vector<double> v, double q) {
    if (v.empty()) {
        throw std::invalid_argument("quantile of empty vector");
    }
    if (q < 0.0 || q > 1.0) {
        throw std::invalid_argument("quantile level outside [0, 1]");
    }
    std::sort(v.begin(), v.end());
    const double h = static_cast<double>(v.size() - 1) * q;
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0 || lo + 1 >= v.size()) {
        return v[lo];
    }
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

double median(std::vector<double> v) {
    if (v.empty()) {
        throw std::invalid_argument("median of empty vector");
    }
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) {
        return v[n / 2];
    }
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_abs_deviation(const std::vector<double>& v, double center) {
    if (v.empty()) {
        throw std::invalid_argument("mean_abs_deviation of empty vector");
    }
    double s = 0.0;
    for (double x : v) {
        s += std::abs(x - center);
    }
    return s / static_cast<double>(v.size());
}

} // namespace rowsu
