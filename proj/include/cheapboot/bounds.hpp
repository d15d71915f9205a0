#ifndef CHEAPBOOT_BOUNDS_HPP
#define CHEAPBOOT_BOUNDS_HPP

#include <cstddef>

namespace cheapboot {

// Inputs to the assumption-level coverage-error bounds: e1 bounds the
// normal-approximation error of the point estimate, e2 the conditional
// resample counterpart (holding with probability >= 1 - beta). e3/e4/sigma
// feed the alternative large-B bound.
struct GenericBoundInputs {
    double e1 = 0.0;
    double e2 = 0.0;
    double beta = 0.0;
    int B = 1;
    double alpha = 0.05;
    double e3 = 0.0;
    double e4 = 0.0;
    double sigma = 1.0;
};

// 2 e1 + 2 B e2 + beta: coverage-error bound of the cheap interval.
double bound_cheap_generic(const GenericBoundInputs& in);

// 2 e1 + 2 e2 + 2 beta: shared bound for the basic and percentile
// intervals (B = infinity quantile methods).
double bound_quantile_generic(const GenericBoundInputs& in);

// min of bound_cheap_generic and the sd-concentration route
//   2 e1 + 2 e4 + sqrt(2/pi) |t_{B,1-a/2} - z_{1-a/2}|
//             + sqrt(2/pi) (e3/sigma) t_{B,1-a/2},
// which stays informative as B grows. Requires sigma > e3.
double bound_cheap_alternative(const GenericBoundInputs& in);

enum class BoundMethod { cheap, quantile };

// Named problem primitives for the model-explicit bounds. Universal
// constants C and C1 are unspecified in the underlying theory; they default
// to 1 and are caller overridable, so these bounds are rate/shape
// explorations rather than absolute certificates.
struct ModelBoundInputs {
    std::size_t n = 3;
    std::size_t p = 1;
    int B = 1;

    // function-of-mean model
    double tau = 1.0;                // sub-Gaussian proxy scale of X
    double hessian_bound = 1.0;      // uniform eigenvalue bound on the Hessian of g
    double grad_norm_lower = 1.0;    // lower bound constant on ||grad g|| / sqrt(p)
    double lambda_sigma = 1.0;       // smallest eigenvalue of the covariance
    double sigma = 1.0;              // asymptotic sd of the target
    double m31 = 1.0;                // E |grad g(mu)^T (X-mu)|^3
    double m32 = 1.0;                // E ||X-mu||^3
    double trace_sigma = 1.0;        // tr(covariance)
    double third_moment_norm = 1.0;  // operator norm of E[(X-mu)^3]

    // linear target, sub-exponential tails
    double orlicz_psi1 = 1.0;        // ||g1^T(X-mu)||_{psi_1}
    double third_abs_moment = 1.0;   // E |g1^T(X-mu)|^3

    // linear target, q-th moment tails
    double q = 4.0;
    double lq_norm = 1.0;    // E[|g1^T(X-mu)/sigma|^q]^{1/q}
    double l4_moment = 1.0;  // E[|g1^T(X-mu)/sigma|^4]

    double C = 1.0;
    double C1 = 1.0;
};

// Smooth function-of-mean model under sub-Gaussian data; the cheap branch
// multiplies the two constant brackets by B, the quantile branch does not.
// Requires n >= 3.
double bound_function_of_mean(const ModelBoundInputs& in, BoundMethod method);

// Linear target with sub-exponential tails (the log^11 n bound).
double bound_linear_subexp(const ModelBoundInputs& in, BoundMethod method);

// Linear target with finite q-th moment, q >= 4.
double bound_linear_moment(const ModelBoundInputs& in, BoundMethod method);

}  // namespace cheapboot

#endif
