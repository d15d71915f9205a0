#include "cheapboot/estimators.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <deque>

namespace cheapboot {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMatrix = Eigen::Map<const RowMatrix>;
using MapVector = Eigen::Map<const Eigen::VectorXd>;

MapMatrix design(const EmpiricalSample& s) {
    return {s.data().data(), static_cast<Eigen::Index>(s.n_rows()),
            static_cast<Eigen::Index>(s.n_cols())};
}

MapVector response(const EmpiricalSample& s) {
    return {s.response().data(), static_cast<Eigen::Index>(s.n_rows())};
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

// log(1 + e^z) without overflow.
double log1pexp(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

double eval_quad_norm(const EmpiricalSample& sample) {
    double out = 0.0;
    for (double m : sample.column_means()) out += m * m;
    return out;
}

double eval_sinusoid(const EmpiricalSample& sample) {
    double out = 0.0;
    for (double m : sample.column_means()) out += std::sin(m);
    return out;
}

double eval_linear(const EmpiricalSample& sample, std::span<const double> g1, double g2) {
    if (g1.size() != sample.n_cols()) {
        throw std::invalid_argument("eval_linear: g1 length " + std::to_string(g1.size()) +
                                    " does not match sample width " +
                                    std::to_string(sample.n_cols()));
    }
    const auto means = sample.column_means();
    double out = g2;
    for (std::size_t j = 0; j < g1.size(); ++j) out += g1[j] * means[j];
    return out;
}

FitReport fit_ols(const EmpiricalSample& sample) {
    const auto n = sample.n_rows();
    const auto p = sample.n_cols();
    if (n < p) {
        throw std::invalid_argument("fit_ols: requires n >= p");
    }
    const auto X = design(sample);
    const auto y = response(sample);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    const auto& R = qr.matrixR();
    const double r00 = std::fabs(R(0, 0));
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(p); ++k) {
        if (std::fabs(R(k, k)) < 1e-10 * r00) {
            const auto column = static_cast<std::size_t>(qr.colsPermutation().indices()(k));
            throw rank_deficiency_error(
                "fit_ols: design matrix is numerically rank-deficient at column " +
                    std::to_string(column),
                column);
        }
    }
    Eigen::VectorXd beta = qr.solve(y);

    FitReport report;
    report.estimate = to_std(beta);
    report.iterations = 1;
    report.grad_norm = (X.transpose() * (y - X * beta)).lpNorm<Eigen::Infinity>();
    report.converged = true;
    return report;
}

FitReport fit_ridge(const EmpiricalSample& sample, double lambda) {
    if (!(lambda > 0.0)) {
        throw std::domain_error("fit_ridge: lambda must be positive");
    }
    const auto n = static_cast<Eigen::Index>(sample.n_rows());
    const auto p = static_cast<Eigen::Index>(sample.n_cols());
    const auto X = design(sample);
    const auto y = response(sample);

    Eigen::VectorXd beta;
    if (n >= p) {
        Eigen::MatrixXd gram = X.transpose() * X;
        gram.diagonal().array() += lambda;
        beta = Eigen::LLT<Eigen::MatrixXd>(gram).solve(X.transpose() * y);
    } else {
        // Dual form: beta = X^T (X X^T + lambda I)^{-1} y, an n x n solve.
        Eigen::MatrixXd gram = X * X.transpose();
        gram.diagonal().array() += lambda;
        beta = X.transpose() * Eigen::LLT<Eigen::MatrixXd>(gram).solve(y);
    }

    const Eigen::VectorXd xty = X.transpose() * y;
    const Eigen::VectorXd residual = X.transpose() * (X * beta) + lambda * beta - xty;

    FitReport report;
    report.estimate = to_std(beta);
    report.iterations = 1;
    report.grad_norm = residual.norm();
    report.converged = residual.norm() <= 1e-8 * (1.0 + xty.norm());
    return report;
}

namespace {

struct LogisticProblem {
    MapMatrix X;
    MapVector y;
    double l2;

    double loglik(const Eigen::VectorXd& beta) const {
        const Eigen::VectorXd eta = X * beta;
        double ll = 0.0;
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            ll += y(i) * eta(i) - log1pexp(eta(i));
        }
        return ll - 0.5 * l2 * beta.squaredNorm();
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& beta) const {
        const Eigen::VectorXd eta = X * beta;
        Eigen::VectorXd mu(eta.size());
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            mu(i) = 1.0 / (1.0 + std::exp(-eta(i)));
        }
        return X.transpose() * (y - mu) - l2 * beta;
    }

    // An unpenalized fit whose fitted probabilities have all saturated
    // onto the labels means the iterates ran off along a separating
    // direction; the gradient-norm rule can report convergence there
    // because the gradient decays like e^{-beta}. Any dataset with a
    // finite maximizer leaves at least one interior probability, so this
    // is checked at termination alongside the in-loop norm guard.
    void check_separation(const Eigen::VectorXd& beta) const {
        if (l2 != 0.0) return;
        const Eigen::VectorXd eta = X * beta;
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            const double mu = 1.0 / (1.0 + std::exp(-eta(i)));
            if (std::fabs(y(i) - mu) > 1e-6) return;
        }
        throw separation_error(
            "fit_logistic: data is perfectly separated; the unpenalized likelihood has no "
            "finite maximizer (set l2 > 0)");
    }
};

FitReport newton_logistic(const LogisticProblem& prob, const LogisticOptions& opt,
                          double grad_tol) {
    const Eigen::Index p = prob.X.cols();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    double ll = prob.loglik(beta);
    FitReport report;
    for (int iter = 1; iter <= opt.max_iterations; ++iter) {
        const Eigen::VectorXd grad = prob.gradient(beta);
        report.iterations = iter;
        report.grad_norm = grad.norm();
        if (report.grad_norm <= grad_tol) {
            report.converged = true;
            break;
        }
        const Eigen::VectorXd eta = prob.X * beta;
        Eigen::VectorXd w(eta.size());
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            const double mu = 1.0 / (1.0 + std::exp(-eta(i)));
            w(i) = mu * (1.0 - mu);
        }
        Eigen::MatrixXd hess = prob.X.transpose() * w.asDiagonal() * prob.X;
        hess.diagonal().array() += prob.l2 + 1e-12;
        const Eigen::VectorXd step = Eigen::LLT<Eigen::MatrixXd>(hess).solve(grad);

        double scale = 1.0;
        for (int halving = 0; halving < 40; ++halving) {
            const Eigen::VectorXd candidate = beta + scale * step;
            const double ll_new = prob.loglik(candidate);
            if (ll_new > ll || halving == 39) {
                beta = candidate;
                ll = ll_new;
                break;
            }
            scale *= 0.5;
        }
        if (prob.l2 == 0.0 && beta.norm() > opt.divergence_norm) {
            throw separation_error(
                "fit_logistic: iterates diverged (likely perfect separation with l2 = 0)");
        }
    }
    report.grad_norm = prob.gradient(beta).norm();
    report.converged = report.grad_norm <= grad_tol;
    prob.check_separation(beta);
    report.estimate = to_std(beta);
    return report;
}

// Limited-memory BFGS (two-loop recursion, memory 10) on the negative
// penalized log-likelihood; keeps large-p fits at O(np) per iteration.
FitReport lbfgs_logistic(const LogisticProblem& prob, const LogisticOptions& opt,
                         double grad_tol) {
    constexpr std::size_t memory = 10;
    const Eigen::Index p = prob.X.cols();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd grad = prob.gradient(beta);
    double ll = prob.loglik(beta);
    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;

    FitReport report;
    for (int iter = 1; iter <= 4 * opt.max_iterations; ++iter) {
        report.iterations = iter;
        report.grad_norm = grad.norm();
        if (report.grad_norm <= grad_tol) {
            report.converged = true;
            break;
        }
        // Two-loop recursion on the ascent direction.
        Eigen::VectorXd q = grad;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alpha[i] * y_hist[i];
        }
        if (!s_hist.empty()) {
            const auto& s = s_hist.back();
            const auto& yv = y_hist.back();
            q *= s.dot(yv) / yv.squaredNorm();
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double b = rho_hist[i] * y_hist[i].dot(q);
            q += (alpha[i] - b) * s_hist[i];
        }

        double scale = 1.0;
        Eigen::VectorXd beta_new;
        double ll_new = ll;
        for (int halving = 0; halving < 50; ++halving) {
            beta_new = beta + scale * q;
            ll_new = prob.loglik(beta_new);
            if (ll_new > ll + 1e-6 * scale * grad.dot(q)) break;
            scale *= 0.5;
        }
        Eigen::VectorXd grad_new = prob.gradient(beta_new);
        Eigen::VectorXd s = beta_new - beta;
        Eigen::VectorXd yv = grad - grad_new;  // ascent convention
        const double sy = s.dot(yv);
        if (sy > 1e-12) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        beta = std::move(beta_new);
        grad = std::move(grad_new);
        ll = ll_new;
        if (prob.l2 == 0.0 && beta.norm() > opt.divergence_norm) {
            throw separation_error(
                "fit_logistic: iterates diverged (likely perfect separation with l2 = 0)");
        }
    }
    report.grad_norm = grad.norm();
    report.converged = report.grad_norm <= grad_tol;
    prob.check_separation(beta);
    report.estimate = to_std(beta);
    return report;
}

}  // namespace

double logistic_loglik(const EmpiricalSample& sample, double l2,
                       std::span<const double> beta) {
    LogisticProblem prob{design(sample), response(sample), l2};
    return prob.loglik(MapVector(beta.data(), static_cast<Eigen::Index>(beta.size())));
}

std::vector<double> logistic_gradient(const EmpiricalSample& sample, double l2,
                                      std::span<const double> beta) {
    LogisticProblem prob{design(sample), response(sample), l2};
    return to_std(prob.gradient(MapVector(beta.data(), static_cast<Eigen::Index>(beta.size()))));
}

FitReport fit_logistic(const EmpiricalSample& sample, double l2, const LogisticOptions& options) {
    if (l2 < 0.0) {
        throw std::domain_error("fit_logistic: l2 must be nonnegative");
    }
    for (double v : sample.response()) {
        if (v != 0.0 && v != 1.0) {
            throw std::invalid_argument("fit_logistic: responses must be exactly 0 or 1");
        }
    }
    LogisticProblem prob{design(sample), response(sample), l2};
    const double grad_tol =
        options.gradient_tol_scale * (1.0 + static_cast<double>(sample.n_rows()));
    if (sample.n_cols() > options.newton_size_limit) {
        return lbfgs_logistic(prob, options, grad_tol);
    }
    return newton_logistic(prob, options, grad_tol);
}

// --- Estimator -------------------------------------------------------------

Estimator Estimator::quad_norm() {
    return {"quad_norm", false,
            [](const EmpiricalSample& s) { return std::vector<double>{eval_quad_norm(s)}; }};
}

Estimator Estimator::sinusoid_sum() {
    return {"sinusoid_sum", false,
            [](const EmpiricalSample& s) { return std::vector<double>{eval_sinusoid(s)}; }};
}

Estimator Estimator::linear_functional(std::vector<double> g1, double g2) {
    return {"linear_functional", false,
            [g1 = std::move(g1), g2](const EmpiricalSample& s) {
                return std::vector<double>{eval_linear(s, g1, g2)};
            }};
}

namespace {
std::vector<double> require_converged(FitReport report, const char* what) {
    if (!report.converged) {
        throw std::runtime_error(std::string(what) + ": solver did not converge (grad norm " +
                                 std::to_string(report.grad_norm) + ")");
    }
    return std::move(report.estimate);
}
}  // namespace

Estimator Estimator::ols() {
    return {"ols", true,
            [](const EmpiricalSample& s) { return require_converged(fit_ols(s), "ols"); }};
}

Estimator Estimator::ridge(double lambda) {
    return {"ridge", true, [lambda](const EmpiricalSample& s) {
                return require_converged(fit_ridge(s, lambda), "ridge");
            }};
}

Estimator Estimator::logistic(double l2) {
    return {"logistic", true, [l2](const EmpiricalSample& s) {
                return require_converged(fit_logistic(s, l2), "logistic");
            }};
}

Estimator Estimator::custom(std::string name, EvalFn fn) {
    return {std::move(name), false, std::move(fn)};
}

Estimator Estimator::with_target_coords(std::vector<std::size_t> coords) const {
    Estimator copy = *this;
    copy.target_coords_ = std::move(coords);
    return copy;
}

std::vector<double> Estimator::evaluate(const EmpiricalSample& sample) const {
    if (needs_response_ && !sample.has_response()) {
        throw std::invalid_argument("estimator '" + name_ + "' requires a response column");
    }
    std::vector<double> full = fn_(sample);
    if (!target_coords_) {
        return full;
    }
    std::vector<double> out;
    out.reserve(target_coords_->size());
    for (std::size_t c : *target_coords_) {
        if (c >= full.size()) {
            throw std::out_of_range("target coordinate " + std::to_string(c) +
                                    " out of range for estimator output of length " +
                                    std::to_string(full.size()));
        }
        out.push_back(full[c]);
    }
    return out;
}

}  // namespace cheapboot
