#include "cheapboot/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "cheapboot/stats.hpp"

namespace cheapboot {

namespace {

constexpr double kSqrt2OverPi = 0.79788456080286535588;

void check_generic(const GenericBoundInputs& in) {
    if (in.e1 < 0.0 || in.e2 < 0.0 || in.beta < 0.0 || in.e3 < 0.0 || in.e4 < 0.0) {
        throw std::domain_error("bounds: error terms must be nonnegative");
    }
    if (in.B < 1) {
        throw std::domain_error("bounds: B must be >= 1");
    }
    if (!(in.alpha > 0.0 && in.alpha < 1.0)) {
        throw std::domain_error("bounds: alpha must lie in (0, 1)");
    }
}

void check_model(const ModelBoundInputs& in) {
    if (in.n < 3) {
        throw std::domain_error("bounds: model bounds require n >= 3");
    }
    if (in.p < 1 || in.B < 1) {
        throw std::domain_error("bounds: need p >= 1 and B >= 1");
    }
    if (!(in.sigma > 0.0 && in.lambda_sigma > 0.0 && in.tau > 0.0 && in.grad_norm_lower > 0.0)) {
        throw std::domain_error("bounds: scale parameters must be positive");
    }
}

}  // namespace

double bound_cheap_generic(const GenericBoundInputs& in) {
    check_generic(in);
    return 2.0 * in.e1 + 2.0 * static_cast<double>(in.B) * in.e2 + in.beta;
}

double bound_quantile_generic(const GenericBoundInputs& in) {
    check_generic(in);
    return 2.0 * in.e1 + 2.0 * in.e2 + 2.0 * in.beta;
}

double bound_cheap_alternative(const GenericBoundInputs& in) {
    check_generic(in);
    if (!(in.sigma > in.e3)) {
        throw std::domain_error("bound_cheap_alternative: requires sigma > e3");
    }
    const double t = t_quantile(in.B, 1.0 - in.alpha / 2.0);
    const double z = normal_quantile(1.0 - in.alpha / 2.0);
    const double second = 2.0 * in.e1 + 2.0 * in.e4 + kSqrt2OverPi * std::fabs(t - z) +
                          kSqrt2OverPi * (in.e3 / in.sigma) * t;
    return std::min(bound_cheap_generic(in), second);
}

double bound_function_of_mean(const ModelBoundInputs& in, BoundMethod method) {
    check_model(in);
    const double n = static_cast<double>(in.n);
    const double p = static_cast<double>(in.p);
    const double B = static_cast<double>(in.B);
    const double logn = std::log(n);
    const double logp = std::log(p);
    const double sqrtn = std::sqrt(n);
    const double L = 1.0 + logn / p;  // the recurring (1 + log n / p) factor
    const double lam = in.lambda_sigma;
    const double lam32 = std::pow(lam, 1.5);
    const double sig = in.sigma;

    const double c_bracket =
        in.m31 / (sqrtn * sig * sig * sig) +
        in.hessian_bound * std::cbrt(in.m31) * in.trace_sigma / (sqrtn * sig * sig) +
        in.hessian_bound * std::pow(in.m32, 2.0 / 3.0) / (std::pow(n, 5.0 / 6.0) * sig) +
        in.hessian_bound * std::cbrt(in.m31) * std::pow(in.m32, 2.0 / 3.0) / (n * sig * sig) +
        (in.hessian_bound * in.tau * in.tau / (in.grad_norm_lower * std::sqrt(lam))) * L *
            std::sqrt(p / n) +
        in.third_moment_norm / lam32 / sqrtn +
        std::pow(in.tau, 3) / lam32 * std::pow(L, 1.5) / sqrtn +
        std::pow(in.tau, 4) * std::sqrt(p) / (lam * lam * n) * std::sqrt(L) +
        in.tau * in.tau * std::sqrt(p) / (lam * n) * std::sqrt(L) +
        std::pow(in.tau, 3) * std::sqrt(p) / (lam32 * n) * L;

    const double c1_bracket =
        std::pow(in.tau, 4) * std::pow(logn, 1.5) / (lam * lam * sqrtn) +
        in.tau * in.tau * std::pow(logn, 1.5) / (lam * sqrtn) +
        std::pow(in.tau, 3) / (lam32 * sqrtn) * std::sqrt(L) * (logn + logp) * std::sqrt(logn);

    if (method == BoundMethod::cheap) {
        return 6.0 / n + B * in.C * c_bracket + B * in.C1 * c1_bracket;
    }
    return 12.0 / n + in.C * c_bracket + in.C1 * c1_bracket;
}

double bound_linear_subexp(const ModelBoundInputs& in, BoundMethod method) {
    check_model(in);
    const double n = static_cast<double>(in.n);
    const double B = static_cast<double>(in.B);
    const double sqrtn = std::sqrt(n);
    const double sig = in.sigma;
    const double third_term = in.third_abs_moment / (sig * sig * sig * sqrtn);
    const double orlicz_term = std::pow(in.orlicz_psi1, 4) * std::pow(std::log(n), 11) /
                               (std::pow(sig, 4) * sqrtn);
    if (method == BoundMethod::cheap) {
        return in.C / n + B * in.C * third_term + B * in.C * orlicz_term;
    }
    return in.C * (1.0 / n + third_term + orlicz_term) + in.C * third_term;
}

double bound_linear_moment(const ModelBoundInputs& in, BoundMethod method) {
    check_model(in);
    if (!(in.q >= 4.0)) {
        throw std::domain_error("bound_linear_moment: requires q >= 4");
    }
    const double n = static_cast<double>(in.n);
    const double B = static_cast<double>(in.B);
    const double logn = std::log(n);
    const double sqrtn = std::sqrt(n);
    const double sig = in.sigma;
    const double moment_max = std::max(in.lq_norm, std::sqrt(in.l4_moment));
    const double slow_rate = std::pow(n, 0.5 - 3.0 / (2.0 * in.q));
    const double third_term = in.C * in.third_abs_moment / (sig * sig * sig * sqrtn);
    if (method == BoundMethod::cheap) {
        return B * in.C1 * std::sqrt(logn) / slow_rate * moment_max + third_term;
    }
    return 2.0 / sqrtn +
           in.C1 * moment_max * (std::pow(logn, 1.5) / sqrtn + std::sqrt(logn) / slow_rate) +
           third_term;
}

}  // namespace cheapboot
