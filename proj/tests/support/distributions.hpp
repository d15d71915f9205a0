#ifndef CHEAPBOOT_TESTS_DISTRIBUTIONS_HPP
#define CHEAPBOOT_TESTS_DISTRIBUTIONS_HPP

#include <functional>
#include <vector>

// Reference distribution functions and goodness-of-fit helpers used only
// by tests.

namespace testdist {

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// CDF of the chi-squared distribution with k degrees of freedom.
double chi_squared_cdf(double x, int k);

// One-sample Kolmogorov-Smirnov distance between a sample and a CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

}  // namespace testdist

#endif
