#ifndef CHEAPBOOT_INTERVALS_HPP
#define CHEAPBOOT_INTERVALS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cheapboot {

enum class IntervalMethod { cheap, basic, percentile, std_error };

const char* method_name(IntervalMethod m);
IntervalMethod method_from_name(const std::string& name);

// A point estimate together with B resample estimates, per target
// coordinate.
struct ReplicateSet {
    std::vector<double> point;                    // length d
    std::vector<std::vector<double>> replicates;  // B entries of length d
    std::size_t n = 0;                            // sample size the estimates came from

    std::size_t dim() const { return point.size(); }
    std::size_t n_replicates() const { return replicates.size(); }
};

// Per-coordinate confidence intervals. degenerate[i] is set exactly when
// lo[i] == hi[i] (zero spread among the replicates).
struct IntervalSet {
    IntervalMethod method = IntervalMethod::cheap;
    double level = 0.0;  // 1 - alpha
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<bool> degenerate;
};

// Quantile-based and sd-based methods need at least two replicates to say
// anything; with B = 1 they are reported as not available.
class insufficient_replicates_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// [point - t_{B,1-a/2} S, point + t_{B,1-a/2} S] with
// S^2 = (1/B) sum_b (replicate_b - point)^2, per coordinate. Valid from
// B = 1. S = 0 yields the degenerate point interval with the flag set.
IntervalSet cheap_interval(const ReplicateSet& r, double alpha);

// [point - q_{1-a/2}, point - q_{a/2}] where q_g are inf-quantiles of the
// replicate deviations from the point estimate. Requires B >= 2.
// Computed as 2*point - (replicate quantile) so that basic and percentile
// intervals are exact mirror images about the point estimate.
IntervalSet basic_interval(const ReplicateSet& r, double alpha);

// [q'_{a/2}, q'_{1-a/2}] with q' the inf-quantiles of the replicates
// themselves. Requires B >= 2.
IntervalSet percentile_interval(const ReplicateSet& r, double alpha);

// point +- z_{1-a/2} * sd, with sd the unbiased (divisor B-1) standard
// deviation of the replicates. Requires B >= 2.
IntervalSet std_error_interval(const ReplicateSet& r, double alpha);

// Expected half-width of the cheap interval at B resamples relative to the
// B = infinity limit:
//   t_{B,1-a/2} sqrt(2/B) Gamma((B+1)/2)/Gamma(B/2) / z_{1-a/2}.
// The sample size and asymptotic sd cancel in the ratio.
double expected_halfwidth_ratio(int B, double alpha);

}  // namespace cheapboot

#endif
