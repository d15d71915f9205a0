#ifndef CHEAPBOOT_STATS_HPP
#define CHEAPBOOT_STATS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace cheapboot {

// Empirical distribution of a finite real sample. Quantiles follow the
// inf convention F^{-1}(q) = inf{x : F(x) >= q} with no interpolation,
// where F(x) = (#values <= x) / m evaluated in double arithmetic.
class Ecdf {
  public:
    // Copies and sorts the data. Throws std::invalid_argument on an empty
    // sample or on NaN entries.
    explicit Ecdf(std::span<const double> values);

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& sorted_values() const { return values_; }

    // Fraction of the sample <= x.
    double cdf(double x) const;

    // Inf-quantile; always returns a member of the sample. q = 0 maps to
    // the minimum. Throws std::domain_error for q outside [0, 1].
    double quantile(double q) const;

    // Like quantile(), but out-of-range probabilities return -inf (q < 0)
    // or +inf (q > 1) instead of throwing. This is the form the quantile
    // perturbation inequality is stated in.
    double quantile_clamped(double q) const;

  private:
    std::vector<double> values_;
};

// Quantile of Student's t with df degrees of freedom, by bracketed
// bisection on the CDF (regularized incomplete beta). Relative accuracy
// is near machine precision, well inside the 1e-9 contract.
// Throws std::domain_error for df < 1 or prob outside (0, 1).
double t_quantile(int df, double prob);

// CDF of Student's t (used by t_quantile and exposed for tests).
double student_t_cdf(double x, int df);

// Standard normal quantile: Acklam's rational approximation polished by
// one Halley step on the erfc-based CDF; absolute error ~1e-15.
// Throws std::domain_error outside (0, 1).
double normal_quantile(double prob);

// Standard normal CDF via erfc.
double normal_cdf(double x);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation
// (modified Lentz).
double regularized_incomplete_beta(double x, double a, double b);

// ln Gamma(x) for x > 0. Throws std::domain_error for x <= 0.
double log_gamma(double x);

// Arithmetic mean; requires at least one value.
double mean_of(std::span<const double> values);

struct Moments {
    double mean = 0.0;
    double sd = 0.0;  // unbiased (divisor length - 1)
};

// Mean and unbiased standard deviation. Throws std::invalid_argument for
// fewer than two values.
Moments sample_moments(std::span<const double> values);

}  // namespace cheapboot

#endif
