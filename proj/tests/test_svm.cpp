#include "doctest.h"

#include <cmath>

#include "rowsu/rng.hpp"
#include "rowsu/svm.hpp"

using namespace rowsu;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m.at(i, j) = rows[i][j];
        }
    }
    return m;
}

SvmModel train_hand_case(double c = 1e6) {
    Matrix x = from_rows({{0, 0}, {0, 1}, {2, 0}, {2, 1}});
    std::vector<double> y{-1, -1, 1, 1};
    SvmConfig cfg;
    cfg.C = c;
    cfg.tolerance = 1e-8;
    cfg.standardize = false;
    cfg.seed = 5;
    return train_linear_svm(x, y, cfg);
}

} // namespace

TEST_CASE("hand case recovers the maximum-margin hyperplane x1 = 1") {
    SvmModel m = train_hand_case();
    REQUIRE(m.w.size() == 2);
    const double norm = m.weight_norm();
    CHECK(m.w[0] / norm == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(m.w[1] / norm) < 1e-6);
    CHECK(m.w[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m.b == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(m.converged);
}

TEST_CASE("margin_distance measures |w.x + b| / ||w||") {
    SvmModel m = train_hand_case();
    CHECK(margin_distance(m, {1.0, 0.5}) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(margin_distance(m, {2.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(margin_distance(m, {0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("unit-margin support vectors sit at distance 1/||w||") {
    SvmModel m = train_hand_case();
    const double inv_norm = 1.0 / m.weight_norm();
    for (std::size_t i = 0; i < m.alphas.size(); ++i) {
        if (m.alphas[i] > 0.0 && m.alphas[i] < m.C) {
            std::vector<double> x{m.train_points.at(i, 0), m.train_points.at(i, 1)};
            CHECK(margin_distance(m, x) == doctest::Approx(inv_norm).epsilon(1e-5));
        }
    }
}

TEST_CASE("dual constraint and weight identity hold after training") {
    SvmModel m = train_hand_case();
    double sum = 0.0;
    std::vector<double> w_rebuilt(m.w.size(), 0.0);
    for (std::size_t i = 0; i < m.alphas.size(); ++i) {
        sum += m.alphas[i] * m.train_targets[i];
        for (std::size_t j = 0; j < w_rebuilt.size(); ++j) {
            w_rebuilt[j] += m.alphas[i] * m.train_targets[i] * m.train_points.at(i, j);
        }
    }
    CHECK(std::abs(sum) < 1e-8);
    for (std::size_t j = 0; j < w_rebuilt.size(); ++j) {
        CHECK(std::abs(w_rebuilt[j] - m.w[j]) < 1e-10);
    }
}

TEST_CASE("duplicating every training point leaves the decision function unchanged") {
    Matrix x = from_rows({{0, 0}, {0, 1}, {2, 0}, {2, 1},
                          {0, 0}, {0, 1}, {2, 0}, {2, 1}});
    std::vector<double> y{-1, -1, 1, 1, -1, -1, 1, 1};
    SvmConfig cfg;
    cfg.C = 1e6;
    cfg.tolerance = 1e-8;
    cfg.standardize = false;
    cfg.seed = 5;
    SvmModel dup = train_linear_svm(x, y, cfg);
    SvmModel base = train_hand_case();
    for (double x1 : {-1.0, 0.0, 0.7, 1.0, 2.0, 3.5}) {
        for (double x2 : {0.0, 1.0, -2.0}) {
            CHECK(dup.decision({x1, x2}) ==
                  doctest::Approx(base.decision({x1, x2})).epsilon(1e-4));
        }
    }
}

TEST_CASE("a constant feature gets zero weight") {
    Matrix x = from_rows({{0, 3.3}, {0.5, 3.3}, {2, 3.3}, {2.5, 3.3}});
    std::vector<double> y{-1, -1, 1, 1};
    SvmConfig cfg;
    cfg.standardize = false;
    cfg.tolerance = 1e-6;
    SvmModel m = train_linear_svm(x, y, cfg);
    CHECK(m.w[1] == 0.0);
    CHECK(std::abs(m.w[0]) > 0.0);
}

TEST_CASE("single-class input is rejected") {
    Matrix x = from_rows({{0, 0}, {1, 1}});
    std::vector<double> y{1, 1};
    CHECK_THROWS_AS(train_linear_svm(x, y, SvmConfig{}), std::invalid_argument);
}

TEST_CASE("label flip negates weights and bias") {
    Rng rng(11);
    Matrix x(12, 3);
    std::vector<double> y(12);
    for (std::size_t i = 0; i < 12; ++i) {
        y[i] = i < 6 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < 3; ++j) {
            x.at(i, j) = rng.next_gaussian() + (i < 6 ? 0.0 : 2.5);
        }
    }
    SvmConfig cfg;
    cfg.tolerance = 1e-7;
    cfg.seed = 9;
    SvmModel m = train_linear_svm(x, y, cfg);
    std::vector<double> flipped = y;
    for (auto& v : flipped) {
        v = -v;
    }
    SvmModel f = train_linear_svm(x, flipped, cfg);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(f.w[j] == doctest::Approx(-m.w[j]).epsilon(1e-4));
    }
    CHECK(f.b == doctest::Approx(-m.b).epsilon(1e-4));
}

TEST_CASE("standardized training recovers the discriminative direction") {
    // feature 0 carries the signal on a wild scale, feature 1 is noise
    Rng rng(21);
    Matrix x(30, 2);
    std::vector<double> y(30);
    for (std::size_t i = 0; i < 30; ++i) {
        y[i] = i < 20 ? -1.0 : 1.0;
        x.at(i, 0) = 1e4 * (rng.next_gaussian() * 0.2 + (i < 20 ? 0.0 : 1.0));
        x.at(i, 1) = rng.next_gaussian();
    }
    SvmConfig cfg;
    cfg.seed = 3;
    SvmModel m = train_linear_svm(x, y, cfg);
    CHECK(m.standardized);
    CHECK(std::abs(m.w[0]) > 2.0 * std::abs(m.w[1]));
    // decision maps raw space through the stored transform
    CHECK(m.decision({1e4, 0.0}) > 0.0);
    CHECK(m.decision({0.0, 0.0}) < 0.0);
}

TEST_CASE("training on a Dataset maps labels to targets") {
    Dataset d(6, 2);
    for (std::size_t i = 0; i < 6; ++i) {
        d.set_value(i, 0, i < 3 ? 0.0 + i * 0.1 : 5.0 + i * 0.1);
        d.set_value(i, 1, 1.0);
        if (i >= 3) {
            d.set_label(i, Label::pos);
        }
    }
    SvmConfig cfg;
    cfg.standardize = false;
    SvmModel m = train_linear_svm(d, cfg);
    CHECK(m.decision({6.0, 1.0}) > 0.0);
    CHECK(m.decision({0.0, 1.0}) < 0.0);
}

TEST_CASE("exhausting max_passes flags non-convergence") {
    Rng rng(5);
    Matrix x(40, 2);
    std::vector<double> y(40);
    for (std::size_t i = 0; i < 40; ++i) {
        y[i] = i % 2 == 0 ? 1.0 : -1.0; // heavily overlapping classes
        x.at(i, 0) = rng.next_gaussian();
        x.at(i, 1) = rng.next_gaussian();
    }
    SvmConfig cfg;
    cfg.C = 1e3;
    cfg.max_passes = 1;
    cfg.tolerance = 1e-9;
    SvmModel m = train_linear_svm(x, y, cfg);
    CHECK_FALSE(m.converged);
}

TEST_CASE("margin_distance maps raw inputs through the standardization") {
    Rng rng(41);
    Matrix x(20, 2);
    std::vector<double> y(20);
    for (std::size_t i = 0; i < 20; ++i) {
        y[i] = i < 10 ? -1.0 : 1.0;
        x.at(i, 0) = 100.0 + 5.0 * (rng.next_gaussian() * 0.1 + (i < 10 ? 0.0 : 2.0));
        x.at(i, 1) = rng.next_gaussian();
    }
    SvmConfig cfg;
    cfg.tolerance = 1e-6;
    cfg.seed = 2;
    SvmModel m = train_linear_svm(x, y, cfg);
    // a point on the decision surface has distance ~0; far points are farther
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < 20; ++i) {
        const double f = m.decision({x.at(i, 0), x.at(i, 1)});
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    CHECK(lo < 0.0);
    CHECK(hi > 0.0);
    // bisect along feature 0 to land near the surface, then check distance
    double a = 100.0, b = 110.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (a + b);
        (m.decision({mid, 0.0}) < 0.0 ? a : b) = mid;
    }
    CHECK(margin_distance(m, {0.5 * (a + b), 0.0}) < 1e-6);
}

TEST_CASE("margin_distance rejects a zero weight vector") {
    SvmModel empty;
    empty.w = {0.0, 0.0};
    empty.feature_mean = {0.0, 0.0};
    empty.feature_sd = {1.0, 1.0};
    CHECK_THROWS_AS(margin_distance(empty, {1.0, 2.0}), std::runtime_error);
}
