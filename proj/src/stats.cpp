#include "cheapboot/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cheapboot {

Ecdf::Ecdf(std::span<const double> values) : values_(values.begin(), values.end()) {
    if (values_.empty()) {
        throw std::invalid_argument("Ecdf: empty sample");
    }
    for (double v : values_) {
        if (std::isnan(v)) {
            throw std::invalid_argument("Ecdf: NaN in sample");
        }
    }
    std::sort(values_.begin(), values_.end());
}

double Ecdf::cdf(double x) const {
    auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double Ecdf::quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::domain_error("Ecdf::quantile: q outside [0, 1]");
    }
    const auto m = values_.size();
    // Smallest k in [1, m] with k/m >= q.
    std::size_t lo = 1, hi = m;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (static_cast<double>(mid) / static_cast<double>(m) >= q) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return values_[lo - 1];
}

double Ecdf::quantile_clamped(double q) const {
    if (q < 0.0) return -std::numeric_limits<double>::infinity();
    if (q > 1.0) return std::numeric_limits<double>::infinity();
    return quantile(q);
}

double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("log_gamma: requires x > 0");
    }
    return std::lgamma(x);
}

namespace {

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the incomplete beta (Lentz's method, the classic
// betacf arrangement). Converges for x < (a+1)/(a+b+2).
double beta_cont_fraction(double x, double a, double b) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0 && b > 0.0)) {
        throw std::domain_error("regularized_incomplete_beta: a, b must be positive");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cont_fraction(x, a, b) / a;
    }
    return 1.0 - front * beta_cont_fraction(1.0 - x, b, a) / b;
}

double student_t_cdf(double x, int df) {
    if (df < 1) {
        throw std::domain_error("student_t_cdf: df must be >= 1");
    }
    const double v = static_cast<double>(df);
    const double tail = 0.5 * regularized_incomplete_beta(v / (v + x * x), 0.5 * v, 0.5);
    return x >= 0.0 ? 1.0 - tail : tail;
}

double t_quantile(int df, double prob) {
    if (df < 1) {
        throw std::domain_error("t_quantile: df must be >= 1");
    }
    if (!(prob > 0.0 && prob < 1.0)) {
        throw std::domain_error("t_quantile: prob must lie in (0, 1)");
    }
    if (prob == 0.5) return 0.0;
    if (prob < 0.5) return -t_quantile(df, 1.0 - prob);

    // Bracket the root of F(x) = prob on [0, hi], then bisect.
    double hi = 1.0;
    while (student_t_cdf(hi, df) < prob) {
        hi *= 2.0;
        if (hi > 1e300) break;
    }
    double lo = 0.0;
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_cdf(mid, df) >= prob) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

double normal_quantile(double prob) {
    if (!(prob > 0.0 && prob < 1.0)) {
        throw std::domain_error("normal_quantile: prob must lie in (0, 1)");
    }
    if (prob == 0.5) return 0.0;

    // Acklam's rational approximation, |relative error| < 1.15e-9.
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (prob < p_low) {
        const double q = std::sqrt(-2.0 * std::log(prob));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (prob <= 1.0 - p_low) {
        const double q = prob - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-prob));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley refinement against the erfc-based CDF.
    const double e = normal_cdf(x) - prob;
    const double u = e * 2.50662827463100050242 * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double mean_of(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean_of: empty sample");
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

Moments sample_moments(std::span<const double> values) {
    if (values.size() < 2) {
        throw std::invalid_argument("sample_moments: need at least two values for the sd");
    }
    const double m = mean_of(values);
    double ss = 0.0;
    for (double v : values) {
        const double dev = v - m;
        ss += dev * dev;
    }
    return {m, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

}  // namespace cheapboot
