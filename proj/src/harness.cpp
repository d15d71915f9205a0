#include "cheapboot/harness.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "cheapboot/estimators.hpp"
#include "cheapboot/resample.hpp"
#include "cheapboot/stats.hpp"
#include "cheapboot/variates.hpp"

namespace cheapboot {

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::ellipsoidal: return "ellipsoidal";
        case Scenario::sinusoidal: return "sinusoidal";
        case Scenario::linreg_indep: return "linreg_indep";
        case Scenario::linreg_expdecay: return "linreg_expdecay";
        case Scenario::linreg_randcov: return "linreg_randcov";
        case Scenario::logreg_indep: return "logreg_indep";
        case Scenario::logreg_expdecay: return "logreg_expdecay";
        case Scenario::logreg_l2: return "logreg_l2";
        case Scenario::ridge: return "ridge";
        case Scenario::netsim: return "netsim";
    }
    return "?";
}

Scenario scenario_from_name(const std::string& name) {
    for (Scenario s :
         {Scenario::ellipsoidal, Scenario::sinusoidal, Scenario::linreg_indep,
          Scenario::linreg_expdecay, Scenario::linreg_randcov, Scenario::logreg_indep,
          Scenario::logreg_expdecay, Scenario::logreg_l2, Scenario::ridge, Scenario::netsim}) {
        if (name == scenario_name(s)) return s;
    }
    throw std::invalid_argument("unknown scenario: " + name);
}

void ExperimentConfig::validate() const {
    if (repetitions < 1) throw std::invalid_argument("config: repetitions must be >= 1");
    if (B_list.empty()) throw std::invalid_argument("config: B_list must be nonempty");
    for (int b : B_list) {
        if (b < 1) throw std::invalid_argument("config: every B must be >= 1");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("config: alpha must lie in (0, 1)");
    }
    if (methods.empty()) throw std::invalid_argument("config: methods must be nonempty");
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    if (scenario == Scenario::netsim) {
        net.validate();
        if (!netsim_truth) {
            throw std::invalid_argument(
                "config: the netsim scenario needs netsim_truth (a pilot estimate)");
        }
    } else {
        if (n < 1 || p < 1) throw std::invalid_argument("config: need n >= 1 and p >= 1");
        if (scenario == Scenario::ridge && !(ridge_lambda > 0.0)) {
            throw std::invalid_argument("config: ridge_lambda must be positive");
        }
        if (scenario == Scenario::logreg_l2 && !(logistic_l2 > 0.0)) {
            throw std::invalid_argument("config: logistic_l2 must be positive");
        }
    }
}

namespace {

// All harness streams are keyed by a master derived from
// (master_seed, n, p), so grid cells that share a master seed but differ in
// size never share a stream, and a one-cell sweep equals a plain run.
std::uint64_t stream_master(const ExperimentConfig& cfg) {
    return mix_seed(mix_seed(cfg.master_seed, cfg.n), cfg.p);
}

bool is_regression(Scenario s) {
    switch (s) {
        case Scenario::linreg_indep:
        case Scenario::linreg_expdecay:
        case Scenario::linreg_randcov:
        case Scenario::logreg_indep:
        case Scenario::logreg_expdecay:
        case Scenario::logreg_l2:
        case Scenario::ridge:
            return true;
        default:
            return false;
    }
}

bool is_logistic(Scenario s) {
    return s == Scenario::logreg_indep || s == Scenario::logreg_expdecay ||
           s == Scenario::logreg_l2;
}

CovarianceKind covariance_of(const ExperimentConfig& cfg) {
    switch (cfg.scenario) {
        case Scenario::linreg_expdecay:
        case Scenario::logreg_expdecay:
            return CovarianceKind::expdecay;
        case Scenario::linreg_randcov:
            return CovarianceKind::randcov;
        case Scenario::ridge:
            return cfg.ridge_covariance;
        default:
            return CovarianceKind::independent;
    }
}

// Regression coefficient patterns. Linear/ridge targets use thirds valued
// 0, 2, -1 (remainder in the last block). Logistic targets use blocks of
// round(p/30) ones then minus-ones (300 at p = 9000), keeping the variance
// of x.beta bounded as p scales.
std::vector<double> true_beta(const ExperimentConfig& cfg) {
    std::vector<double> beta(cfg.p, 0.0);
    if (is_logistic(cfg.scenario)) {
        const auto k = static_cast<std::size_t>(
            std::max<long long>(1, std::llround(static_cast<double>(cfg.p) / 30.0)));
        for (std::size_t j = 0; j < cfg.p; ++j) {
            beta[j] = j < k ? 1.0 : (j < 2 * k ? -1.0 : 0.0);
        }
    } else {
        const std::size_t third = cfg.p / 3;
        for (std::size_t j = 0; j < cfg.p; ++j) {
            beta[j] = j < third ? 0.0 : (j < 2 * third ? 2.0 : -1.0);
        }
    }
    return beta;
}

// Lower Cholesky factor of the exponential-decay correlation 0.8^|i-j|.
Eigen::MatrixXd expdecay_chol(std::size_t p) {
    Eigen::MatrixXd sigma(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::pow(0.8, std::fabs(static_cast<double>(i) - static_cast<double>(j)));
        }
    }
    return Eigen::LLT<Eigen::MatrixXd>(sigma).matrixL();
}

// The randcov ground-truth mixing matrix A (iid U(0,1)) is part of the
// data-generating distribution, so it is fixed across repetitions: drawn
// from a master-derived stream independent of every repetition stream.
Eigen::MatrixXd randcov_matrix(const ExperimentConfig& cfg) {
    SeedSpec seed;
    seed.master_seed = mix_seed(stream_master(cfg), 0xA11AULL);
    CounterStream stream(seed, StreamKind::data);
    Eigen::MatrixXd A(cfg.p, cfg.p);
    for (std::size_t i = 0; i < cfg.p; ++i) {
        for (std::size_t j = 0; j < cfg.p; ++j) {
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = stream.uniform01();
        }
    }
    return A;
}

// Per-experiment constants shared read-only by all repetitions.
struct ScenarioContext {
    std::vector<double> beta;
    Eigen::MatrixXd mixing;  // L or A; empty for independent covariates
    Estimator estimator;
    std::vector<std::size_t> net_sizes;

    static ScenarioContext make(const ExperimentConfig& cfg) {
        ScenarioContext ctx{{}, {}, make_estimator(cfg), {}};
        if (cfg.scenario == Scenario::netsim) {
            ctx.net_sizes = cfg.net_sizes;
            if (ctx.net_sizes.empty()) {
                // Spread over the reference range 3e4..6e4.
                for (std::size_t j = 0; j < kNumSources; ++j) {
                    ctx.net_sizes.push_back(30000 + 2500 * j);
                }
            }
            return ctx;
        }
        if (is_regression(cfg.scenario)) ctx.beta = true_beta(cfg);
        switch (covariance_of(cfg)) {
            case CovarianceKind::expdecay: ctx.mixing = expdecay_chol(cfg.p); break;
            case CovarianceKind::randcov: ctx.mixing = randcov_matrix(cfg); break;
            case CovarianceKind::independent: break;
        }
        return ctx;
    }

    static Estimator make_estimator(const ExperimentConfig& cfg) {
        Estimator est = [&] {
            switch (cfg.scenario) {
                case Scenario::ellipsoidal: return Estimator::quad_norm();
                case Scenario::sinusoidal: return Estimator::sinusoid_sum();
                case Scenario::ridge: return Estimator::ridge(cfg.ridge_lambda);
                case Scenario::logreg_l2: return Estimator::logistic(cfg.logistic_l2);
                case Scenario::logreg_indep:
                case Scenario::logreg_expdecay: return Estimator::logistic(0.0);
                case Scenario::netsim:
                    return Estimator::custom("netsim", nullptr);  // handled separately
                default: return Estimator::ols();
            }
        }();
        if (cfg.target_coords) {
            est = est.with_target_coords(*cfg.target_coords);
        }
        return est;
    }
};

ScenarioDraw generate_matrix_scenario(const ExperimentConfig& cfg, const ScenarioContext& ctx,
                                      std::size_t rep) {
    const std::size_t n = cfg.n, p = cfg.p;
    SeedSpec seed{stream_master(cfg), rep, 0, 0};
    CounterStream stream(seed, StreamKind::data);

    // Covariate rows are 0.1 * (z or Mz) (+ 0.02 shift for the ellipsoidal
    // target), matching the N(., 0.01 Sigma) recipes.
    std::vector<double> data(n * p);
    const bool mixed = ctx.mixing.size() > 0;
    Eigen::VectorXd z(static_cast<Eigen::Index>(p));
    const double shift = cfg.scenario == Scenario::ellipsoidal ? 0.02 : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            z(static_cast<Eigen::Index>(j)) = draw_normal(stream);
        }
        if (mixed) {
            Eigen::VectorXd x = ctx.mixing * z;
            for (std::size_t j = 0; j < p; ++j) {
                data[i * p + j] = shift + 0.1 * x(static_cast<Eigen::Index>(j));
            }
        } else {
            for (std::size_t j = 0; j < p; ++j) {
                data[i * p + j] = shift + 0.1 * z(static_cast<Eigen::Index>(j));
            }
        }
    }

    std::vector<double> truth;
    std::optional<std::vector<double>> response;
    if (is_regression(cfg.scenario)) {
        response.emplace(n);
        const bool logistic = is_logistic(cfg.scenario);
        for (std::size_t i = 0; i < n; ++i) {
            double eta = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                eta += data[i * p + j] * ctx.beta[j];
            }
            if (logistic) {
                const double prob = 1.0 / (1.0 + std::exp(-eta));
                (*response)[i] = stream.uniform01() < prob ? 1.0 : 0.0;
            } else {
                (*response)[i] = eta + draw_normal(stream);
            }
        }
        truth = ctx.beta;
    } else if (cfg.scenario == Scenario::ellipsoidal) {
        truth = {static_cast<double>(p) * 0.02 * 0.02};
    } else {
        truth = {0.0};  // sinusoidal: mean vector is zero
    }

    if (cfg.target_coords && is_regression(cfg.scenario)) {
        std::vector<double> sub;
        sub.reserve(cfg.target_coords->size());
        for (std::size_t c : *cfg.target_coords) {
            if (c >= truth.size()) {
                throw std::invalid_argument("config: target coordinate out of range");
            }
            sub.push_back(truth[c]);
        }
        truth = std::move(sub);
    }
    return {EmpiricalSample(n, p, std::move(data), std::move(response)), std::move(truth)};
}

}  // namespace

ScenarioDraw generate_scenario(const ExperimentConfig& config, std::size_t rep) {
    config.validate();
    const auto ctx = ScenarioContext::make(config);
    if (config.scenario == Scenario::netsim) {
        SeedSpec seed{stream_master(config), rep, 0, 0};
        return {generate_input_data(config.net, ctx.net_sizes, seed), {*config.netsim_truth}};
    }
    return generate_matrix_scenario(config, ctx, rep);
}

double CoverageCell::coverage(std::size_t coord, std::size_t reps) const {
    return reps == 0 ? 0.0
                     : static_cast<double>(cover_count[coord]) / static_cast<double>(reps);
}

double CoverageCell::mean_width(std::size_t coord, std::size_t reps) const {
    return reps == 0 ? 0.0 : width_sum[coord] / static_cast<double>(reps);
}

double CoverageCell::binomial_se(std::size_t coord, std::size_t reps) const {
    if (reps == 0) return 0.0;
    const double c = coverage(coord, reps);
    return std::sqrt(c * (1.0 - c) / static_cast<double>(reps));
}

double CoverageCell::avg_coverage(std::size_t reps) const {
    if (cover_count.empty() || reps == 0) return 0.0;
    double total = 0.0;
    for (std::size_t c : cover_count) total += static_cast<double>(c);
    return total / (static_cast<double>(reps) * static_cast<double>(cover_count.size()));
}

double CoverageCell::avg_width(std::size_t reps) const {
    if (width_sum.empty() || reps == 0) return 0.0;
    double total = 0.0;
    for (double w : width_sum) total += w;
    return total / (static_cast<double>(reps) * static_cast<double>(width_sum.size()));
}

namespace {

struct RepCellResult {
    std::vector<char> covered;
    std::vector<double> width;
};

struct RepResult {
    bool errored = false;
    std::string message;
    std::vector<RepCellResult> cells;  // aligned with the (method, B) cell list
};

struct CellSpec {
    IntervalMethod method;
    int B;
    bool available;
};

std::vector<CellSpec> cell_specs(const ExperimentConfig& cfg) {
    std::vector<CellSpec> specs;
    for (IntervalMethod m : cfg.methods) {
        for (int B : cfg.B_list) {
            const bool available = m == IntervalMethod::cheap || B >= 2;
            specs.push_back({m, B, available});
        }
    }
    return specs;
}

IntervalSet make_interval(IntervalMethod method, const ReplicateSet& r, double alpha) {
    switch (method) {
        case IntervalMethod::cheap: return cheap_interval(r, alpha);
        case IntervalMethod::basic: return basic_interval(r, alpha);
        case IntervalMethod::percentile: return percentile_interval(r, alpha);
        case IntervalMethod::std_error: return std_error_interval(r, alpha);
    }
    throw std::logic_error("unreachable");
}

RepResult run_repetition(const ExperimentConfig& cfg, const ScenarioContext& ctx,
                         std::size_t rep, const std::vector<CellSpec>& specs) {
    RepResult result;
    try {
        const int B_max = *std::max_element(cfg.B_list.begin(), cfg.B_list.end());

        std::vector<double> truth;
        std::vector<double> point;
        std::vector<std::vector<double>> replicates;
        replicates.reserve(static_cast<std::size_t>(B_max));

        if (cfg.scenario == Scenario::netsim) {
            SeedSpec data_seed{stream_master(cfg), rep, 0, 0};
            const auto data = generate_input_data(cfg.net, ctx.net_sizes, data_seed);
            truth = {*cfg.netsim_truth};
            point = {delay_estimator(data, cfg.net, data_seed)};
            for (int b = 1; b <= B_max; ++b) {
                SeedSpec seed{stream_master(cfg), rep, static_cast<std::uint64_t>(b), 0};
                const auto redrawn = resample_multi(data, seed);
                replicates.push_back({delay_estimator(redrawn, cfg.net, seed)});
            }
        } else {
            auto draw = generate_matrix_scenario(cfg, ctx, rep);
            const auto& sample = std::get<EmpiricalSample>(draw.data);
            truth = std::move(draw.truth);
            point = ctx.estimator.evaluate(sample);
            for (int b = 1; b <= B_max; ++b) {
                SeedSpec seed{stream_master(cfg), rep, static_cast<std::uint64_t>(b), 0};
                replicates.push_back(ctx.estimator.evaluate(resample(sample, seed)));
            }
        }

        const std::size_t d = point.size();
        result.cells.resize(specs.size());
        for (std::size_t c = 0; c < specs.size(); ++c) {
            if (!specs[c].available) continue;
            ReplicateSet rset;
            rset.point = point;
            rset.n = cfg.scenario == Scenario::netsim ? 0 : cfg.n;
            rset.replicates.assign(replicates.begin(),
                                   replicates.begin() + specs[c].B);
            const IntervalSet interval = make_interval(specs[c].method, rset, cfg.alpha);
            auto& cell = result.cells[c];
            cell.covered.resize(d);
            cell.width.resize(d);
            for (std::size_t i = 0; i < d; ++i) {
                cell.covered[i] = (truth[i] >= interval.lo[i] && truth[i] <= interval.hi[i]);
                cell.width[i] = interval.hi[i] - interval.lo[i];
            }
        }
    } catch (const std::exception& e) {
        result.errored = true;
        result.message = e.what();
        result.cells.clear();
    }
    return result;
}

}  // namespace

CoverageReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto ctx = ScenarioContext::make(config);
    const auto specs = cell_specs(config);
    const std::size_t reps = config.repetitions;

    std::vector<RepResult> results(reps);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t rep = next.fetch_add(1);
            if (rep >= reps) break;
            results[rep] = run_repetition(config, ctx, rep, specs);
        }
    };
    const int n_threads = std::min<int>(config.workers, static_cast<int>(reps));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    CoverageReport report;
    report.config = config;
    report.cells.reserve(specs.size());
    for (const auto& spec : specs) {
        CoverageCell cell;
        cell.method = spec.method;
        cell.B = spec.B;
        cell.available = spec.available;
        report.cells.push_back(std::move(cell));
    }

    // Deterministic fold in repetition order, independent of worker count.
    std::size_t effective = 0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        const auto& r = results[rep];
        if (r.errored) {
            ++report.excluded_repetitions;
            if (report.exclusion_messages.size() < 5) {
                report.exclusion_messages.push_back("rep " + std::to_string(rep) + ": " +
                                                    r.message);
            }
            continue;
        }
        ++effective;
        for (std::size_t c = 0; c < specs.size(); ++c) {
            if (!specs[c].available) continue;
            const auto& cell_result = r.cells[c];
            auto& cell = report.cells[c];
            if (cell.cover_count.empty()) {
                cell.cover_count.assign(cell_result.covered.size(), 0);
                cell.width_sum.assign(cell_result.covered.size(), 0.0);
                report.dim = cell_result.covered.size();
            }
            for (std::size_t i = 0; i < cell_result.covered.size(); ++i) {
                cell.cover_count[i] += cell_result.covered[i] ? 1 : 0;
                cell.width_sum[i] += cell_result.width[i];
            }
        }
    }
    report.effective_repetitions = effective;
    return report;
}

std::vector<CoverageReport> sweep(const ExperimentConfig& base,
                                  const std::vector<std::size_t>& n_list) {
    if (n_list.empty()) {
        throw std::invalid_argument("sweep: empty n grid");
    }
    std::vector<CoverageReport> reports;
    reports.reserve(n_list.size());
    for (std::size_t n : n_list) {
        ExperimentConfig cfg = base;
        cfg.n = n;
        // Cells are stream-independent because run_experiment keys every
        // stream by (master_seed, n, p).
        reports.push_back(run_experiment(cfg));
    }
    return reports;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string coverage_csv(const std::vector<CoverageReport>& reports) {
    std::ostringstream out;
    out << "scenario,method,B,n,p,coordinate,coverage,binomial_se,mean_width,excluded_reps\n";
    for (const auto& rep : reports) {
        const auto& cfg = rep.config;
        for (const auto& cell : rep.cells) {
            const std::string prefix = std::string(scenario_name(cfg.scenario)) + "," +
                                       method_name(cell.method) + "," + std::to_string(cell.B) +
                                       "," + std::to_string(cfg.n) + "," + std::to_string(cfg.p) +
                                       ",";
            if (!cell.available || rep.effective_repetitions == 0) {
                out << prefix << "avg,NA,NA,NA," << rep.excluded_repetitions << "\n";
                continue;
            }
            const std::size_t reps = rep.effective_repetitions;
            for (std::size_t i = 0; i < cell.cover_count.size(); ++i) {
                out << prefix << i << "," << fmt17(cell.coverage(i, reps)) << ","
                    << fmt17(cell.binomial_se(i, reps)) << "," << fmt17(cell.mean_width(i, reps))
                    << "," << rep.excluded_repetitions << "\n";
            }
            out << prefix << "avg," << fmt17(cell.avg_coverage(reps)) << ",";
            const double avg_cov = cell.avg_coverage(reps);
            out << fmt17(std::sqrt(avg_cov * (1.0 - avg_cov) / static_cast<double>(reps)))
                << "," << fmt17(cell.avg_width(reps)) << "," << rep.excluded_repetitions << "\n";
        }
    }
    return out.str();
}

std::string boxplot_csv(const std::vector<CoverageReport>& reports) {
    std::ostringstream out;
    out << "scenario,method,B,n,p,stat,min,q1,median,q3,max\n";
    for (const auto& rep : reports) {
        const auto& cfg = rep.config;
        for (const auto& cell : rep.cells) {
            if (!cell.available || rep.effective_repetitions == 0 || cell.cover_count.empty()) {
                continue;
            }
            const std::size_t reps = rep.effective_repetitions;
            std::vector<double> coverages, widths;
            for (std::size_t i = 0; i < cell.cover_count.size(); ++i) {
                coverages.push_back(cell.coverage(i, reps));
                widths.push_back(cell.mean_width(i, reps));
            }
            for (const auto& [stat, values] :
                 {std::pair{std::string("coverage"), coverages},
                  std::pair{std::string("width"), widths}}) {
                Ecdf ecdf(values);
                out << scenario_name(cfg.scenario) << "," << method_name(cell.method) << ","
                    << cell.B << "," << cfg.n << "," << cfg.p << "," << stat << ","
                    << fmt17(ecdf.sorted_values().front()) << "," << fmt17(ecdf.quantile(0.25))
                    << "," << fmt17(ecdf.quantile(0.5)) << "," << fmt17(ecdf.quantile(0.75))
                    << "," << fmt17(ecdf.sorted_values().back()) << "\n";
            }
        }
    }
    return out.str();
}

}  // namespace cheapboot
