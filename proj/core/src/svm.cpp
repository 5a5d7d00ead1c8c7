#include "rowsu/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rowsu/rng.hpp"
#include "rowsu/stats.hpp"

namespace rowsu {

namespace {

constexpr double kAlphaEps = 1e-12;

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        s += a[k] * b[k];
    }
    return s;
}

/// Platt-style SMO state over a solve-space matrix.
struct Smo {
    const Matrix& x;
    const std::vector<double>& y;
    double C;
    double tol;
    Rng rng;

    std::vector<double> alpha;
    std::vector<double> w;
    std::vector<double> err; // f(x_i) - y_i
    double b = 0.0;

    Smo(const Matrix& x_, const std::vector<double>& y_, double c, double t, std::uint64_t seed)
        : x(x_), y(y_), C(c), tol(t), rng(seed), alpha(x_.rows, 0.0), w(x_.cols, 0.0),
          err(x_.rows, 0.0) {
        for (std::size_t i = 0; i < x.rows; ++i) {
            err[i] = -y[i]; // f == 0 initially
        }
    }

    double kernel(std::size_t i, std::size_t j) const {
        return dot(x.row(i), x.row(j), x.cols);
    }

    void refresh_errors() {
        for (std::size_t i = 0; i < x.rows; ++i) {
            err[i] = dot(w.data(), x.row(i), x.cols) + b - y[i];
        }
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) {
            return false;
        }
        const double a1_old = alpha[i1];
        const double a2_old = alpha[i2];
        const double y1 = y[i1];
        const double y2 = y[i2];
        const double e1 = err[i1];
        const double e2 = err[i2];
        const double s = y1 * y2;

        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, a2_old - a1_old);
            hi = std::min(C, C + a2_old - a1_old);
        } else {
            lo = std::max(0.0, a1_old + a2_old - C);
            hi = std::min(C, a1_old + a2_old);
        }
        if (lo >= hi) {
            return false;
        }

        const double k11 = kernel(i1, i1);
        const double k12 = kernel(i1, i2);
        const double k22 = kernel(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2;
        if (eta > 0.0) {
            a2 = a2_old + y2 * (e1 - e2) / eta;
            a2 = std::clamp(a2, lo, hi);
        } else {
            // Degenerate direction: evaluate the dual objective at both ends.
            // With f(x) = w.x + b the error identity gives y_i w.x_i - 1 =
            // y_i (E_i - b).
            const double f1 = y1 * (e1 - b) - a1_old * k11 - s * a2_old * k12;
            const double f2 = y2 * (e2 - b) - s * a1_old * k12 - a2_old * k22;
            const double l1 = a1_old + s * (a2_old - lo);
            const double h1 = a1_old + s * (a2_old - hi);
            const double lo_obj = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 +
                                  s * lo * l1 * k12;
            const double hi_obj = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 +
                                  s * hi * h1 * k12;
            if (lo_obj < hi_obj - kAlphaEps) {
                a2 = lo;
            } else if (lo_obj > hi_obj + kAlphaEps) {
                a2 = hi;
            } else {
                return false;
            }
        }
        if (std::abs(a2 - a2_old) < kAlphaEps * (a2 + a2_old + kAlphaEps)) {
            return false;
        }
        const double a1 = a1_old + s * (a2_old - a2);

        const double d1 = y1 * (a1 - a1_old);
        const double d2 = y2 * (a2 - a2_old);
        const double b1 = b - e1 - d1 * k11 - d2 * k12;
        const double b2 = b - e2 - d1 * k12 - d2 * k22;
        if (a1 > 0.0 && a1 < C) {
            b = b1;
        } else if (a2 > 0.0 && a2 < C) {
            b = b2;
        } else {
            b = 0.5 * (b1 + b2);
        }

        alpha[i1] = a1;
        alpha[i2] = a2;
        const double* x1 = x.row(i1);
        const double* x2 = x.row(i2);
        for (std::size_t k = 0; k < x.cols; ++k) {
            w[k] += d1 * x1[k] + d2 * x2[k];
        }
        refresh_errors();
        return true;
    }

    bool examine(std::size_t i2) {
        const double y2 = y[i2];
        const double a2 = alpha[i2];
        const double r2 = err[i2] * y2;
        const bool violates = (r2 < -tol && a2 < C) || (r2 > tol && a2 > 0.0);
        if (!violates) {
            return false;
        }

        std::vector<std::size_t> non_bound;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (alpha[i] > 0.0 && alpha[i] < C) {
                non_bound.push_back(i);
            }
        }
        if (non_bound.size() > 1) {
            // Second-choice heuristic: the partner with the largest |E1 - E2|.
            std::size_t best = non_bound[0];
            double gap = -1.0;
            for (std::size_t i : non_bound) {
                const double g = std::abs(err[i] - err[i2]);
                if (g > gap) {
                    gap = g;
                    best = i;
                }
            }
            if (take_step(best, i2)) {
                return true;
            }
        }
        if (!non_bound.empty()) {
            const std::size_t start = rng.next_index(non_bound.size());
            for (std::size_t k = 0; k < non_bound.size(); ++k) {
                if (take_step(non_bound[(start + k) % non_bound.size()], i2)) {
                    return true;
                }
            }
        }
        const std::size_t start = rng.next_index(alpha.size());
        for (std::size_t k = 0; k < alpha.size(); ++k) {
            if (take_step((start + k) % alpha.size(), i2)) {
                return true;
            }
        }
        return false;
    }

    bool solve(std::size_t max_passes) {
        std::size_t changed = 0;
        bool examine_all = true;
        std::size_t passes = 0;
        while (changed > 0 || examine_all) {
            if (++passes > max_passes) {
                return false;
            }
            changed = 0;
            if (examine_all) {
                for (std::size_t i = 0; i < alpha.size(); ++i) {
                    changed += examine(i) ? 1 : 0;
                }
            } else {
                for (std::size_t i = 0; i < alpha.size(); ++i) {
                    if (alpha[i] > 0.0 && alpha[i] < C) {
                        changed += examine(i) ? 1 : 0;
                    }
                }
            }
            if (examine_all) {
                examine_all = false;
            } else if (changed == 0) {
                examine_all = true;
            }
        }
        return true;
    }
};

} // namespace

SvmModel train_linear_svm(const Matrix& x, const std::vector<double>& targets,
                          const SvmConfig& cfg) {
    if (x.rows != targets.size()) {
        throw std::invalid_argument("train_linear_svm: target count does not match row count");
    }
    bool has_pos = false;
    bool has_neg = false;
    for (double t : targets) {
        (t > 0 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) {
        throw std::invalid_argument("train_linear_svm: both classes must be present");
    }
    if (cfg.C <= 0.0) {
        throw std::invalid_argument("train_linear_svm: C must be positive");
    }

    SvmModel model;
    model.C = cfg.C;
    model.tolerance = cfg.tolerance;
    model.standardized = cfg.standardize;
    model.feature_mean.assign(x.cols, 0.0);
    model.feature_sd.assign(x.cols, 1.0);

    // Build the solve-space matrix, dropping zero-variance columns.
    std::vector<std::size_t> active;
    Matrix z(x.rows, x.cols);
    if (cfg.standardize) {
        for (std::size_t j = 0; j < x.cols; ++j) {
            std::vector<double> col(x.rows);
            for (std::size_t i = 0; i < x.rows; ++i) {
                col[i] = x.at(i, j);
            }
            const double m = mean(col);
            const double sd = std::sqrt(population_variance(col));
            model.feature_mean[j] = m;
            model.feature_sd[j] = sd;
            if (sd > 0.0) {
                active.push_back(j);
            }
        }
        z = Matrix(x.rows, active.size());
        for (std::size_t i = 0; i < x.rows; ++i) {
            for (std::size_t c = 0; c < active.size(); ++c) {
                const std::size_t j = active[c];
                z.at(i, c) = (x.at(i, j) - model.feature_mean[j]) / model.feature_sd[j];
            }
        }
    } else {
        for (std::size_t j = 0; j < x.cols; ++j) {
            bool constant = true;
            for (std::size_t i = 1; i < x.rows && constant; ++i) {
                constant = x.at(i, j) == x.at(0, j);
            }
            if (constant) {
                model.feature_sd[j] = 0.0; // marks the dropped column
                model.feature_mean[j] = x.rows > 0 ? x.at(0, j) : 0.0;
            } else {
                active.push_back(j);
            }
        }
        z = Matrix(x.rows, active.size());
        for (std::size_t i = 0; i < x.rows; ++i) {
            for (std::size_t c = 0; c < active.size(); ++c) {
                z.at(i, c) = x.at(i, active[c]);
            }
        }
    }
    if (active.empty()) {
        throw std::invalid_argument("train_linear_svm: every feature is constant");
    }

    Smo smo(z, targets, cfg.C, cfg.tolerance, derive_seed(cfg.seed, {0x53f0}));
    model.converged = smo.solve(cfg.max_passes);

    // Recompute w exactly from the final alphas so the dual identity holds to
    // round-off, then pick b from the margin support vectors.
    std::vector<double> w_active(z.cols, 0.0);
    for (std::size_t i = 0; i < z.rows; ++i) {
        const double c = smo.alpha[i] * targets[i];
        if (c == 0.0) {
            continue;
        }
        const double* row = z.row(i);
        for (std::size_t k = 0; k < z.cols; ++k) {
            w_active[k] += c * row[k];
        }
    }
    double b_sum = 0.0;
    std::size_t b_count = 0;
    for (std::size_t i = 0; i < z.rows; ++i) {
        if (smo.alpha[i] > 0.0 && smo.alpha[i] < cfg.C) {
            b_sum += targets[i] - dot(w_active.data(), z.row(i), z.cols);
            ++b_count;
        }
    }
    if (b_count > 0) {
        model.b = b_sum / static_cast<double>(b_count);
    } else if (smo.alpha.end() != std::find_if(smo.alpha.begin(), smo.alpha.end(),
                                               [](double a) { return a > 0.0; })) {
        // All support vectors at bound: place b midway between the class hulls.
        double max_neg = -std::numeric_limits<double>::infinity();
        double min_pos = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < z.rows; ++i) {
            const double f = dot(w_active.data(), z.row(i), z.cols);
            if (targets[i] > 0) {
                min_pos = std::min(min_pos, f);
            } else {
                max_neg = std::max(max_neg, f);
            }
        }
        model.b = -0.5 * (max_neg + min_pos);
    } else {
        model.b = smo.b;
    }

    model.w.assign(x.cols, 0.0);
    for (std::size_t c = 0; c < active.size(); ++c) {
        model.w[active[c]] = w_active[c];
    }
    model.alphas = std::move(smo.alpha);
    model.train_targets = targets;
    model.train_points = std::move(z);
    return model;
}

SvmModel train_linear_svm(const Dataset& train, const SvmConfig& cfg) {
    std::vector<std::size_t> all(train.n_genes());
    for (std::size_t j = 0; j < all.size(); ++j) {
        all[j] = j;
    }
    Matrix x = reduced_matrix(train, all);
    std::vector<double> targets(train.n_samples());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        targets[i] = train.label(i) == Label::pos ? 1.0 : -1.0;
    }
    return train_linear_svm(x, targets, cfg);
}

double SvmModel::decision(const std::vector<double>& x) const {
    if (x.size() != w.size()) {
        throw std::invalid_argument("SvmModel::decision: dimension mismatch");
    }
    double f = b;
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j] == 0.0) {
            continue;
        }
        const double z = feature_sd[j] > 0.0 ? (x[j] - feature_mean[j]) / feature_sd[j] : 0.0;
        f += w[j] * z;
    }
    return f;
}

std::vector<double> SvmModel::weights_original_scale() const {
    std::vector<double> out(w.size(), 0.0);
    for (std::size_t j = 0; j < w.size(); ++j) {
        out[j] = feature_sd[j] > 0.0 ? w[j] / feature_sd[j] : 0.0;
    }
    return out;
}

double SvmModel::weight_norm() const {
    double s = 0.0;
    for (double v : w) {
        s += v * v;
    }
    return std::sqrt(s);
}

double margin_distance(const SvmModel& model, const std::vector<double>& x) {
    const double norm = model.weight_norm();
    if (norm == 0.0) {
        throw std::runtime_error("margin_distance: degenerate model with zero weight vector");
    }
    return std::abs(model.decision(x)) / norm;
}

} // namespace rowsu
