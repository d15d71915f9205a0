#include "cheapboot/intervals.hpp"

#include <cmath>

#include "cheapboot/stats.hpp"

namespace cheapboot {

const char* method_name(IntervalMethod m) {
    switch (m) {
        case IntervalMethod::cheap: return "cheap";
        case IntervalMethod::basic: return "basic";
        case IntervalMethod::percentile: return "percentile";
        case IntervalMethod::std_error: return "std_error";
    }
    return "?";
}

IntervalMethod method_from_name(const std::string& name) {
    if (name == "cheap") return IntervalMethod::cheap;
    if (name == "basic") return IntervalMethod::basic;
    if (name == "percentile") return IntervalMethod::percentile;
    if (name == "std_error") return IntervalMethod::std_error;
    throw std::invalid_argument("unknown interval method: " + name);
}

namespace {

void validate(const ReplicateSet& r, double alpha, std::size_t min_replicates,
              const char* method) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error(std::string(method) + ": alpha must lie in (0, 1)");
    }
    if (r.point.empty()) {
        throw std::invalid_argument(std::string(method) + ": empty point estimate");
    }
    if (r.n_replicates() < 1) {
        throw std::invalid_argument(std::string(method) + ": need at least one replicate");
    }
    for (const auto& rep : r.replicates) {
        if (rep.size() != r.dim()) {
            throw std::invalid_argument(std::string(method) +
                                        ": replicate dimension mismatch");
        }
    }
    if (r.n_replicates() < min_replicates) {
        throw insufficient_replicates_error(
            std::string(method) + ": needs B >= 2 replicates (got B = " +
            std::to_string(r.n_replicates()) + "); reported as N.A. in tables");
    }
}

IntervalSet make_result(IntervalMethod method, double alpha, std::vector<double> lo,
                        std::vector<double> hi) {
    IntervalSet out;
    out.method = method;
    out.level = 1.0 - alpha;
    out.degenerate.resize(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) {
        out.degenerate[i] = (lo[i] == hi[i]);
    }
    out.lo = std::move(lo);
    out.hi = std::move(hi);
    return out;
}

// Inf-quantiles of the replicates for coordinate i at the two tail levels.
std::pair<double, double> replicate_quantiles(const ReplicateSet& r, std::size_t i,
                                              double alpha) {
    std::vector<double> values(r.n_replicates());
    for (std::size_t b = 0; b < r.n_replicates(); ++b) {
        values[b] = r.replicates[b][i];
    }
    Ecdf ecdf(values);
    return {ecdf.quantile(alpha / 2.0), ecdf.quantile(1.0 - alpha / 2.0)};
}

}  // namespace

IntervalSet cheap_interval(const ReplicateSet& r, double alpha) {
    validate(r, alpha, 1, "cheap_interval");
    const double t = t_quantile(static_cast<int>(r.n_replicates()), 1.0 - alpha / 2.0);
    const std::size_t d = r.dim();
    std::vector<double> lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
        double ss = 0.0;
        for (const auto& rep : r.replicates) {
            const double dev = rep[i] - r.point[i];
            ss += dev * dev;
        }
        const double s = std::sqrt(ss / static_cast<double>(r.n_replicates()));
        lo[i] = r.point[i] - t * s;
        hi[i] = r.point[i] + t * s;
    }
    return make_result(IntervalMethod::cheap, alpha, std::move(lo), std::move(hi));
}

IntervalSet basic_interval(const ReplicateSet& r, double alpha) {
    validate(r, alpha, 2, "basic_interval");
    const std::size_t d = r.dim();
    std::vector<double> lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
        const auto [q_lo, q_hi] = replicate_quantiles(r, i, alpha);
        // point - (q - point) with the deviation quantile q - point taken
        // member-for-member from the replicate quantile.
        lo[i] = 2.0 * r.point[i] - q_hi;
        hi[i] = 2.0 * r.point[i] - q_lo;
    }
    return make_result(IntervalMethod::basic, alpha, std::move(lo), std::move(hi));
}

IntervalSet percentile_interval(const ReplicateSet& r, double alpha) {
    validate(r, alpha, 2, "percentile_interval");
    const std::size_t d = r.dim();
    std::vector<double> lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
        const auto [q_lo, q_hi] = replicate_quantiles(r, i, alpha);
        lo[i] = q_lo;
        hi[i] = q_hi;
    }
    return make_result(IntervalMethod::percentile, alpha, std::move(lo), std::move(hi));
}

IntervalSet std_error_interval(const ReplicateSet& r, double alpha) {
    validate(r, alpha, 2, "std_error_interval");
    const double z = normal_quantile(1.0 - alpha / 2.0);
    const std::size_t d = r.dim();
    std::vector<double> lo(d), hi(d);
    std::vector<double> values(r.n_replicates());
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t b = 0; b < r.n_replicates(); ++b) {
            values[b] = r.replicates[b][i];
        }
        const double sd = sample_moments(values).sd;
        lo[i] = r.point[i] - z * sd;
        hi[i] = r.point[i] + z * sd;
    }
    return make_result(IntervalMethod::std_error, alpha, std::move(lo), std::move(hi));
}

double expected_halfwidth_ratio(int B, double alpha) {
    if (B < 1) {
        throw std::domain_error("expected_halfwidth_ratio: B must be >= 1");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("expected_halfwidth_ratio: alpha must lie in (0, 1)");
    }
    const double b = static_cast<double>(B);
    const double t = t_quantile(B, 1.0 - alpha / 2.0);
    const double z = normal_quantile(1.0 - alpha / 2.0);
    const double gamma_ratio = std::exp(log_gamma(0.5 * (b + 1.0)) - log_gamma(0.5 * b));
    return t * std::sqrt(2.0 / b) * gamma_ratio / z;
}

}  // namespace cheapboot
