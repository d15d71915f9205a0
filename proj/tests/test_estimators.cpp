#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cheapboot/estimators.hpp"
#include "cheapboot/resample.hpp"
#include "cheapboot/rng.hpp"

using namespace cheapboot;

namespace {

EmpiricalSample random_regression(std::size_t n, std::size_t p, std::uint64_t seed,
                                  bool binary_response = false) {
    CounterStream stream(SeedSpec{seed, 0, 0, 0}, StreamKind::data);
    std::vector<double> data(n * p);
    for (auto& v : data) v = stream.uniform01() * 2.0 - 1.0;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (binary_response) {
            y[i] = stream.uniform01() < 0.5 ? 0.0 : 1.0;
        } else {
            y[i] = stream.uniform01() * 4.0 - 2.0;
        }
    }
    return {n, p, std::move(data), std::move(y)};
}

}  // namespace

TEST_CASE("eval_quad_norm") {
    CHECK(eval_quad_norm(EmpiricalSample(2, 2, {3, 4, 3, 4})) == doctest::Approx(25.0));
    CHECK(eval_quad_norm(EmpiricalSample(2, 2, {1, -1, -1, 1})) == doctest::Approx(0.0));
    CHECK(eval_quad_norm(EmpiricalSample(2, 2, {0, 0, 2, 0})) == doctest::Approx(1.0));
}

TEST_CASE("eval_sinusoid") {
    CHECK(eval_sinusoid(EmpiricalSample(2, 3, {1, 2, 3, -1, -2, -3})) ==
          doctest::Approx(0.0).epsilon(1e-15));
    const double half_pi = std::numbers::pi / 2.0;
    CHECK(eval_sinusoid(EmpiricalSample(1, 1, {half_pi})) == doctest::Approx(1.0));
    const double sixth_pi = std::numbers::pi / 6.0;
    CHECK(eval_sinusoid(EmpiricalSample(1, 2, {sixth_pi, sixth_pi})) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eval_linear") {
    EmpiricalSample s(1, 2, {2.0, 3.0});
    CHECK(eval_linear(s, std::vector<double>{0.0, 0.0}, 7.0) == 7.0);
    CHECK(eval_linear(s, std::vector<double>{1.0, 0.0}, 0.0) == 2.0);
    CHECK(eval_linear(s, std::vector<double>{1.0, 1.0}, 1.0) == 6.0);
    CHECK_THROWS_AS(eval_linear(s, std::vector<double>{1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("function-of-mean estimators are row-permutation invariant") {
    const auto s = random_regression(20, 4, 81);
    std::vector<double> reversed(s.data().rbegin(), s.data().rend());
    // Reversing the flat buffer reverses rows when each row is itself
    // palindromic; instead rotate whole rows.
    std::vector<double> rotated;
    for (std::size_t i = 0; i < s.n_rows(); ++i) {
        const auto row = s.row((i + 7) % s.n_rows());
        rotated.insert(rotated.end(), row.begin(), row.end());
    }
    EmpiricalSample t(s.n_rows(), s.n_cols(), rotated);
    CHECK(eval_quad_norm(s) == doctest::Approx(eval_quad_norm(t)).epsilon(1e-13));
    CHECK(eval_sinusoid(s) == doctest::Approx(eval_sinusoid(t)).epsilon(1e-13));
}

TEST_CASE("fit_ols exact and degenerate cases") {
    SUBCASE("exact fit") {
        EmpiricalSample s(3, 1, {1, 2, 3}, std::vector<double>{2, 4, 6});
        const auto fit = fit_ols(s);
        CHECK(fit.converged);
        CHECK(fit.estimate[0] == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("zero response gives zero coefficients") {
        auto s = random_regression(10, 3, 5);
        EmpiricalSample zeroed(s.n_rows(), s.n_cols(), s.data(),
                               std::vector<double>(s.n_rows(), 0.0));
        for (double b : fit_ols(zeroed).estimate) {
            CHECK(b == doctest::Approx(0.0).epsilon(1e-14));
        }
    }
    SUBCASE("rank deficiency names the offending column") {
        // Column 2 duplicates column 0.
        std::vector<double> data;
        CounterStream stream(SeedSpec{17, 0, 0, 0}, StreamKind::data);
        for (std::size_t i = 0; i < 8; ++i) {
            const double a = stream.uniform01(), b = stream.uniform01();
            data.insert(data.end(), {a, b, a});
        }
        EmpiricalSample s(8, 3, data, std::vector<double>(8, 1.0));
        try {
            fit_ols(s);
            FAIL("expected rank_deficiency_error");
        } catch (const rank_deficiency_error& e) {
            CHECK((e.column() == 0 || e.column() == 2));
        }
    }
    SUBCASE("n < p rejected") {
        CHECK_THROWS_AS(fit_ols(random_regression(2, 5, 3)), std::invalid_argument);
    }
}

TEST_CASE("fit_ols matches the normal-equation oracle on tiny instances") {
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
        const auto s = random_regression(5, 2, 100 + trial);
        // Hand elimination of the 2x2 normal equations.
        double a = 0, b = 0, c = 0, d = 0, e = 0;
        for (std::size_t i = 0; i < 5; ++i) {
            a += s(i, 0) * s(i, 0);
            b += s(i, 0) * s(i, 1);
            c += s(i, 1) * s(i, 1);
            d += s(i, 0) * s.response()[i];
            e += s(i, 1) * s.response()[i];
        }
        const double det = a * c - b * b;
        const double beta0 = (c * d - b * e) / det;
        const double beta1 = (a * e - b * d) / det;
        const auto fit = fit_ols(s);
        CHECK(fit.estimate[0] == doctest::Approx(beta0).epsilon(1e-9));
        CHECK(fit.estimate[1] == doctest::Approx(beta1).epsilon(1e-9));
    }
}

TEST_CASE("fit_ols residual orthogonality and permutation invariance") {
    const auto s = random_regression(30, 4, 7);
    const auto fit = fit_ols(s);
    // || X^T (y - X beta) ||_inf small relative to || X^T y ||_inf.
    double xty_max = 0.0;
    std::vector<double> resid(s.n_rows());
    for (std::size_t i = 0; i < s.n_rows(); ++i) {
        double pred = 0.0;
        for (std::size_t j = 0; j < s.n_cols(); ++j) pred += s(i, j) * fit.estimate[j];
        resid[i] = s.response()[i] - pred;
    }
    for (std::size_t j = 0; j < s.n_cols(); ++j) {
        double dot = 0.0, xty = 0.0;
        for (std::size_t i = 0; i < s.n_rows(); ++i) {
            dot += s(i, j) * resid[i];
            xty += s(i, j) * s.response()[i];
        }
        xty_max = std::max(xty_max, std::fabs(xty));
        CHECK(std::fabs(dot) <= 1e-8 * (1.0 + xty_max));
    }

    // Row permutation leaves the solution unchanged.
    std::vector<double> data;
    std::vector<double> y;
    for (std::size_t i = 0; i < s.n_rows(); ++i) {
        const std::size_t k = (i * 11 + 3) % s.n_rows();
        const auto row = s.row(k);
        data.insert(data.end(), row.begin(), row.end());
        y.push_back(s.response()[k]);
    }
    EmpiricalSample perm(s.n_rows(), s.n_cols(), data, y);
    const auto fit2 = fit_ols(perm);
    for (std::size_t j = 0; j < s.n_cols(); ++j) {
        CHECK(fit.estimate[j] == doctest::Approx(fit2.estimate[j]).epsilon(1e-8));
    }
}

TEST_CASE("fit_ridge") {
    SUBCASE("zero response") {
        auto s = random_regression(6, 2, 11);
        EmpiricalSample zeroed(6, 2, s.data(), std::vector<double>(6, 0.0));
        for (double b : fit_ridge(zeroed, 3.0).estimate) CHECK(b == 0.0);
    }
    SUBCASE("huge lambda shrinks to zero") {
        const auto s = random_regression(10, 3, 12);
        for (double b : fit_ridge(s, 1e12).estimate) {
            CHECK(std::fabs(b) <= 1e-6);
        }
    }
    SUBCASE("scalar closed form") {
        EmpiricalSample s(2, 1, {1, 1}, std::vector<double>{1, 1});
        CHECK(fit_ridge(s, 2.0).estimate[0] == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("dual form at p > n agrees with the primal normal equations") {
        const auto s = random_regression(4, 9, 13);
        const auto fit = fit_ridge(s, 0.7);
        CHECK(fit.converged);
        // Residual check: (X^T X + lambda I) beta = X^T y.
        CHECK(fit.grad_norm <= 1e-8);
    }
    SUBCASE("duplicate columns are fine for ridge, unlike OLS") {
        std::vector<double> data;
        CounterStream stream(SeedSpec{19, 0, 0, 0}, StreamKind::data);
        std::vector<double> y;
        for (std::size_t i = 0; i < 12; ++i) {
            const double a = stream.uniform01();
            data.insert(data.end(), {a, a});
            y.push_back(2.0 * a + 0.1);
        }
        EmpiricalSample s(12, 2, data, y);
        const auto fit = fit_ridge(s, 0.5);
        CHECK(fit.converged);
        CHECK_THROWS_AS(fit_ols(s), rank_deficiency_error);
    }
    SUBCASE("ridge approaches OLS as lambda goes to zero") {
        const auto s = random_regression(40, 3, 14);
        const auto ols = fit_ols(s);
        const auto ridge = fit_ridge(s, 1e-10);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(ridge.estimate[j] == doctest::Approx(ols.estimate[j]).epsilon(1e-6));
        }
    }
    CHECK_THROWS_AS(fit_ridge(random_regression(4, 2, 15), 0.0), std::domain_error);
}

TEST_CASE("fit_logistic") {
    SUBCASE("mirror-symmetric data has the zero solution") {
        // (+x, 1), (-x, 1), (+x, 0), (-x, 0) in equal counts.
        std::vector<double> data{0.7, -0.7, 0.7, -0.7, 1.3, -1.3, 1.3, -1.3};
        std::vector<double> y{1, 1, 0, 0, 1, 1, 0, 0};
        EmpiricalSample s(8, 1, data, y);
        const auto fit = fit_logistic(s, 0.0);
        CHECK(fit.converged);
        CHECK(std::fabs(fit.estimate[0]) < 1e-8);
    }
    SUBCASE("all-equal responses stay finite under regularization") {
        EmpiricalSample s(4, 1, {-1.0, 1.0, -0.5, 0.5}, std::vector<double>{1, 1, 1, 1});
        const auto fit = fit_logistic(s, 0.5);
        CHECK(fit.converged);
        CHECK(std::isfinite(fit.estimate[0]));
    }
    SUBCASE("tiny instance matches a grid-search maximizer") {
        EmpiricalSample s(6, 1, {-1.2, -0.4, 0.1, 0.5, 0.9, 1.4},
                          std::vector<double>{0, 0, 1, 0, 1, 1});
        const double l2 = 0.3;
        const auto fit = fit_logistic(s, l2);
        REQUIRE(fit.converged);
        double best_b = 0.0, best_ll = -1e300;
        for (double b = -10.0; b <= 10.0; b += 1e-4) {
            const double ll = logistic_loglik(s, l2, std::vector<double>{b});
            if (ll > best_ll) {
                best_ll = ll;
                best_b = b;
            }
        }
        CHECK(std::fabs(fit.estimate[0] - best_b) < 1e-4);
    }
    SUBCASE("separation raises an error without regularization") {
        EmpiricalSample s(6, 1, {-3, -2, -1, 1, 2, 3}, std::vector<double>{0, 0, 0, 1, 1, 1});
        CHECK_THROWS_AS(fit_logistic(s, 0.0), separation_error);
    }
    SUBCASE("non-binary response rejected") {
        EmpiricalSample s(2, 1, {1, 2}, std::vector<double>{0.0, 0.5});
        CHECK_THROWS_AS(fit_logistic(s, 0.1), std::invalid_argument);
    }
}

TEST_CASE("logistic gradient at the optimum matches finite differences") {
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
        const auto s = random_regression(25, 3, 300 + trial, true);
        const double l2 = 0.2;
        const auto fit = fit_logistic(s, l2);
        REQUIRE(fit.converged);
        const auto grad = logistic_gradient(s, l2, fit.estimate);
        const double h = 1e-6;
        for (std::size_t j = 0; j < 3; ++j) {
            auto up = fit.estimate, dn = fit.estimate;
            up[j] += h;
            dn[j] -= h;
            const double fd = (logistic_loglik(s, l2, up) - logistic_loglik(s, l2, dn)) / (2 * h);
            CHECK(grad[j] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
        }
    }
}

TEST_CASE("L-BFGS fallback agrees with Newton") {
    const auto s = random_regression(60, 5, 400, true);
    const double l2 = 0.4;
    const auto newton = fit_logistic(s, l2);
    LogisticOptions opt;
    opt.newton_size_limit = 0;  // force the quasi-Newton path
    const auto lbfgs = fit_logistic(s, l2, opt);
    REQUIRE(newton.converged);
    REQUIRE(lbfgs.converged);
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(lbfgs.estimate[j] == doctest::Approx(newton.estimate[j]).epsilon(1e-5));
    }
}

TEST_CASE("estimator applied to a resample equals estimator of the gathered rows") {
    const auto s = random_regression(15, 2, 55);
    const SeedSpec seed{909, 2, 3, 0};
    const auto indices = draw_indices(s.n_rows(), seed);
    std::vector<double> data;
    std::vector<double> y;
    for (auto idx : indices) {
        const auto row = s.row(idx);
        data.insert(data.end(), row.begin(), row.end());
        y.push_back(s.response()[idx]);
    }
    EmpiricalSample gathered(s.n_rows(), s.n_cols(), data, y);
    const auto resampled = resample(s, seed);
    const auto est = Estimator::ols();
    CHECK(est.evaluate(resampled) == est.evaluate(gathered));
}

TEST_CASE("estimator interface") {
    const auto s = random_regression(12, 3, 66);
    const auto est = Estimator::ols().with_target_coords({2, 0});
    const auto out = est.evaluate(s);
    const auto full = fit_ols(s).estimate;
    REQUIRE(out.size() == 2);
    CHECK(out[0] == full[2]);
    CHECK(out[1] == full[0]);

    EmpiricalSample no_resp(2, 1, {1.0, 2.0});
    CHECK_THROWS_AS(Estimator::ols().evaluate(no_resp), std::invalid_argument);

    const auto custom = Estimator::custom(
        "mean_of_first", [](const EmpiricalSample& x) {
            return std::vector<double>{x.column_means()[0]};
        });
    CHECK(custom.evaluate(no_resp)[0] == doctest::Approx(1.5));
}
