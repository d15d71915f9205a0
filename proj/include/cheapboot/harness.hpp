#ifndef CHEAPBOOT_HARNESS_HPP
#define CHEAPBOOT_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cheapboot/intervals.hpp"
#include "cheapboot/netsim.hpp"
#include "cheapboot/sample.hpp"

namespace cheapboot {

// Fixed default master seed: runs are reproducible unless the caller
// chooses otherwise.
inline constexpr std::uint64_t kDefaultMasterSeed = 0xC8EAB007ULL;

enum class Scenario {
    ellipsoidal,
    sinusoidal,
    linreg_indep,
    linreg_expdecay,
    linreg_randcov,
    logreg_indep,
    logreg_expdecay,
    logreg_l2,
    ridge,
    netsim,
};

const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

enum class CovarianceKind { independent, expdecay, randcov };

struct ExperimentConfig {
    Scenario scenario = Scenario::sinusoidal;
    std::size_t n = 2000;
    std::size_t p = 50;
    std::vector<int> B_list = {1, 2, 5, 10};
    double alpha = 0.05;
    std::size_t repetitions = 1000;
    std::vector<IntervalMethod> methods = {IntervalMethod::cheap, IntervalMethod::basic,
                                           IntervalMethod::percentile,
                                           IntervalMethod::std_error};
    std::uint64_t master_seed = kDefaultMasterSeed;
    int workers = 1;

    // Scenario-specific knobs.
    double ridge_lambda = 0.1;
    double logistic_l2 = 1.0;
    CovarianceKind ridge_covariance = CovarianceKind::independent;
    std::optional<std::vector<std::size_t>> target_coords;

    // netsim scenario: simulator configuration, per-source data sizes, and
    // an externally supplied target value (the exact steady-state delay has
    // no closed form; a long-run pilot estimate stands in for it).
    NetworkConfig net = NetworkConfig::preset("c3-exponential");
    std::vector<std::size_t> net_sizes;
    std::optional<double> netsim_truth;

    void validate() const;
};

// Fresh data plus the true target vector for one repetition.
struct ScenarioDraw {
    std::variant<EmpiricalSample, MultiSourceSample> data;
    std::vector<double> truth;
};

// Draws a data set per the scenario recipe using streams keyed by
// (master_seed, rep, 0, .), and returns the analytic target.
ScenarioDraw generate_scenario(const ExperimentConfig& config, std::size_t rep);

// Aggregated results for one (method, B) cell.
struct CoverageCell {
    IntervalMethod method = IntervalMethod::cheap;
    int B = 1;
    bool available = true;                // false => method needs B >= 2 ("N.A.")
    std::vector<std::size_t> cover_count; // per coordinate
    std::vector<double> width_sum;        // per coordinate

    double coverage(std::size_t coord, std::size_t effective_reps) const;
    double mean_width(std::size_t coord, std::size_t effective_reps) const;
    double binomial_se(std::size_t coord, std::size_t effective_reps) const;
    double avg_coverage(std::size_t effective_reps) const;
    double avg_width(std::size_t effective_reps) const;
};

struct CoverageReport {
    ExperimentConfig config;
    std::size_t dim = 0;
    std::size_t effective_repetitions = 0;
    std::size_t excluded_repetitions = 0;
    std::vector<std::string> exclusion_messages;  // first few, for diagnostics
    std::vector<CoverageCell> cells;
};

// Runs `repetitions` independent repetitions: generate data, evaluate the
// point estimate, draw max(B_list) resamples once, and score every
// (method, B) pair on the length-B replicate prefix. Coverage counts the
// truth inside the closed interval. The report is a pure function of
// (config, master_seed) at any worker count; repetitions that throw are
// excluded and counted.
CoverageReport run_experiment(const ExperimentConfig& config);

// run_experiment per n in n_list with cell-independent seed derivation.
std::vector<CoverageReport> sweep(const ExperimentConfig& base,
                                  const std::vector<std::size_t>& n_list);

// CSV emission (17 significant digits, bit-stable across reruns).
// Columns: scenario,method,B,n,p,coordinate,coverage,binomial_se,mean_width,
// excluded_reps; per-coordinate rows plus one "avg" row per cell.
std::string coverage_csv(const std::vector<CoverageReport>& reports);

// Coordinate-wise five-number summaries (min, q1, median, q3, max) of
// coverage and width per cell, for box plots.
std::string boxplot_csv(const std::vector<CoverageReport>& reports);

}  // namespace cheapboot

#endif
