#ifndef CHEAPBOOT_ESTIMATORS_HPP
#define CHEAPBOOT_ESTIMATORS_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cheapboot/sample.hpp"

namespace cheapboot {

// Solver outcome for the regression estimators.
struct FitReport {
    std::vector<double> estimate;
    int iterations = 0;
    double grad_norm = 0.0;
    bool converged = false;
};

class rank_deficiency_error : public std::runtime_error {
  public:
    rank_deficiency_error(std::string msg, std::size_t column)
        : std::runtime_error(std::move(msg)), column_(column) {}
    std::size_t column() const { return column_; }

  private:
    std::size_t column_;
};

// Perfect separation (or other divergence) in unregularized logistic
// regression: the likelihood has no finite maximizer.
class separation_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// --- function-of-mean targets -------------------------------------------

// Squared Euclidean norm of the column-mean vector.
double eval_quad_norm(const EmpiricalSample& sample);

// Sum of sines of the column means.
double eval_sinusoid(const EmpiricalSample& sample);

// g1 . column_means + g2. Throws std::invalid_argument on a length
// mismatch between g1 and the sample width.
double eval_linear(const EmpiricalSample& sample, std::span<const double> g1, double g2);

// --- regression fits ------------------------------------------------------

// Least squares via column-pivoted Householder QR. Requires n >= p and a
// numerically full-rank design (every |R_kk| >= 1e-10 |R_00|); otherwise
// throws rank_deficiency_error naming the offending column.
FitReport fit_ols(const EmpiricalSample& sample);

// Minimizer of ||Y - X b||^2 + lambda ||b||^2 for lambda > 0. Solves the
// p x p normal system when n >= p and the dual n x n system when p > n,
// so the cost stays at min(n, p)^3.
FitReport fit_ridge(const EmpiricalSample& sample, double lambda);

struct LogisticOptions {
    int max_iterations = 100;
    double gradient_tol_scale = 1e-8;  // stop at ||grad|| <= scale * (1 + n)
    double divergence_norm = 1e4;      // separation guard for l2 = 0
    std::size_t newton_size_limit = 2000;  // above this p, use L-BFGS
};

// Penalized maximum likelihood for P(Y=1|x) = 1/(1+exp(-x.b)) with penalty
// l2 ||b||^2 / 2 subtracted from the log-likelihood. Newton with
// step-halving up to newton_size_limit, limited-memory BFGS beyond it.
// Responses must be exactly 0 or 1.
FitReport fit_logistic(const EmpiricalSample& sample, double l2,
                       const LogisticOptions& options = {});

// Penalized log-likelihood and its gradient at beta (exposed so tests can
// check the returned optimum against finite differences).
double logistic_loglik(const EmpiricalSample& sample, double l2,
                       std::span<const double> beta);
std::vector<double> logistic_gradient(const EmpiricalSample& sample, double l2,
                                      std::span<const double> beta);

// --- the pluggable functional psi ----------------------------------------

// One estimator behind a uniform sample -> vector evaluation interface.
// Fit-based estimators throw if the solver fails to converge, so a harness
// can record the repetition as errored instead of using a bogus estimate.
class Estimator {
  public:
    using EvalFn = std::function<std::vector<double>(const EmpiricalSample&)>;

    static Estimator quad_norm();
    static Estimator sinusoid_sum();
    static Estimator linear_functional(std::vector<double> g1, double g2);
    static Estimator ols();
    static Estimator ridge(double lambda);
    static Estimator logistic(double l2);
    static Estimator custom(std::string name, EvalFn fn);

    // Restrict the reported output to a subset of coordinates.
    Estimator with_target_coords(std::vector<std::size_t> coords) const;

    std::vector<double> evaluate(const EmpiricalSample& sample) const;

    const std::string& name() const { return name_; }
    bool needs_response() const { return needs_response_; }

  private:
    Estimator(std::string name, bool needs_response, EvalFn fn)
        : name_(std::move(name)), needs_response_(needs_response), fn_(std::move(fn)) {}

    std::string name_;
    bool needs_response_ = false;
    EvalFn fn_;
    std::optional<std::vector<std::size_t>> target_coords_;
};

}  // namespace cheapboot

#endif
