// Command-line front end: confidence intervals from data files, Monte Carlo
// coverage experiments, the network simulator, width tables, and coverage
// error bound evaluation. All computation lives in the library; every
// subcommand only wires files to library calls and serializes the result.

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cheapboot/bounds.hpp"
#include "cheapboot/config_io.hpp"
#include "cheapboot/estimators.hpp"
#include "cheapboot/harness.hpp"
#include "cheapboot/intervals.hpp"
#include "cheapboot/io.hpp"
#include "cheapboot/netsim.hpp"
#include "cheapboot/resample.hpp"
#include "cheapboot/stats.hpp"

namespace {

using cheapboot::SeedSpec;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitTooManyErrors = 3;
constexpr int kExitDivergence = 4;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Every output file gets a sidecar with the fully resolved parameters.
void write_sidecar(const std::string& out_path, const json& resolved) {
    cheapboot::write_text_file(out_path + ".config.json", resolved.dump(2) + "\n");
}

cheapboot::ResponseSelector parse_response(const std::string& arg) {
    if (arg.empty()) return cheapboot::ResponseSelector::none();
    const bool all_digits =
        std::all_of(arg.begin(), arg.end(), [](unsigned char ch) { return std::isdigit(ch); });
    if (all_digits) {
        return cheapboot::ResponseSelector::by_index(std::stoul(arg));
    }
    return cheapboot::ResponseSelector::by_name(arg);
}

struct EstimatorSpec {
    std::string name = "quad_norm";
    std::vector<double> g1;
    double g2 = 0.0;
    double lambda = 0.1;
    double l2 = 1.0;
    std::vector<std::size_t> coords;

    cheapboot::Estimator build() const {
        cheapboot::Estimator est = [&]() -> cheapboot::Estimator {
            if (name == "quad_norm") return cheapboot::Estimator::quad_norm();
            if (name == "sinusoid_sum") return cheapboot::Estimator::sinusoid_sum();
            if (name == "linear") return cheapboot::Estimator::linear_functional(g1, g2);
            if (name == "ols") return cheapboot::Estimator::ols();
            if (name == "ridge") return cheapboot::Estimator::ridge(lambda);
            if (name == "logistic") return cheapboot::Estimator::logistic(l2);
            throw std::invalid_argument("unknown estimator: " + name);
        }();
        if (!coords.empty()) est = est.with_target_coords(coords);
        return est;
    }
};

int cmd_ci(const std::string& data_path, const std::string& response_arg,
           const EstimatorSpec& spec, int B, double alpha, std::uint64_t seed,
           const std::vector<std::string>& method_names, const std::string& out_path) {
    const auto sample = [&] {
        const std::filesystem::path p = data_path;
        if (p.extension() == ".svm" || p.extension() == ".svmlight") {
            if (!response_arg.empty()) {
                throw std::invalid_argument(
                    "svmlight files carry the response as the label field; drop --response");
            }
            return cheapboot::load_svmlight(p);
        }
        const auto selector = parse_response(response_arg);
        if (p.extension() == ".bin") return cheapboot::load_matrix_binary(p, selector);
        return cheapboot::load_csv(p, selector);
    }();
    const auto estimator = spec.build();

    cheapboot::ReplicateSet rset;
    rset.point = estimator.evaluate(sample);
    rset.n = sample.n_rows();
    for (int b = 1; b <= B; ++b) {
        SeedSpec s{seed, 0, static_cast<std::uint64_t>(b), 0};
        rset.replicates.push_back(estimator.evaluate(cheapboot::resample(sample, s)));
    }

    json out;
    out["estimator"] = estimator.name();
    out["n"] = sample.n_rows();
    out["p"] = sample.n_cols();
    out["B"] = B;
    out["alpha"] = alpha;
    out["seed"] = seed;
    out["point"] = rset.point;
    out["methods"] = json::array();
    for (const auto& name : method_names) {
        const auto method = cheapboot::method_from_name(name);
        json entry;
        entry["method"] = name;
        try {
            const auto interval = [&] {
                switch (method) {
                    case cheapboot::IntervalMethod::cheap:
                        return cheapboot::cheap_interval(rset, alpha);
                    case cheapboot::IntervalMethod::basic:
                        return cheapboot::basic_interval(rset, alpha);
                    case cheapboot::IntervalMethod::percentile:
                        return cheapboot::percentile_interval(rset, alpha);
                    default:
                        return cheapboot::std_error_interval(rset, alpha);
                }
            }();
            entry["level"] = interval.level;
            entry["intervals"] = json::array();
            for (std::size_t i = 0; i < interval.lo.size(); ++i) {
                entry["intervals"].push_back({{"coordinate", i},
                                              {"lo", interval.lo[i]},
                                              {"hi", interval.hi[i]},
                                              {"degenerate", bool(interval.degenerate[i])}});
            }
        } catch (const cheapboot::insufficient_replicates_error& e) {
            entry["na"] = true;
            entry["note"] = e.what();
            std::cerr << "warning: " << name << ": N.A. at B = " << B << "\n";
        }
        out["methods"].push_back(entry);
    }

    const std::string text = out.dump(2) + "\n";
    std::cout << text;
    if (!out_path.empty()) {
        cheapboot::write_text_file(out_path, text);
        json resolved = out;
        resolved.erase("methods");
        resolved.erase("point");
        resolved["data"] = data_path;
        resolved["response"] = response_arg;
        resolved["requested_methods"] = method_names;
        write_sidecar(out_path, resolved);
    }
    return kExitOk;
}

int cmd_width(const std::vector<int>& B_list, double alpha, const std::string& out_path) {
    std::string csv = "B,ratio,inflation_percent\n";
    for (int B : B_list) {
        const double ratio = cheapboot::expected_halfwidth_ratio(B, alpha);
        csv += std::to_string(B) + "," + fmt17(ratio) + "," + fmt17(100.0 * (ratio - 1.0)) + "\n";
    }
    std::cout << csv;
    if (!out_path.empty()) {
        cheapboot::write_text_file(out_path, csv);
        write_sidecar(out_path, json{{"B_list", B_list}, {"alpha", alpha}});
    }
    return kExitOk;
}

int cmd_coverage(const std::string& config_path, const std::string& out_prefix,
                 std::optional<int> workers_override) {
    const json doc = cheapboot::load_json_file(config_path);
    cheapboot::ExperimentConfig config = cheapboot::experiment_config_from_json(doc);
    if (workers_override) config.workers = *workers_override;
    config.validate();

    std::vector<cheapboot::CoverageReport> reports;
    if (doc.contains("n_list")) {
        reports = cheapboot::sweep(config, doc.at("n_list").get<std::vector<std::size_t>>());
    } else {
        reports = {cheapboot::run_experiment(config)};
    }

    const std::string csv = cheapboot::coverage_csv(reports);
    const std::string box = cheapboot::boxplot_csv(reports);
    cheapboot::write_text_file(out_prefix + ".csv", csv);
    cheapboot::write_text_file(out_prefix + "_boxplot.csv", box);

    json summary;
    summary["cells"] = json::array();
    std::size_t total_reps = 0, total_excluded = 0;
    for (const auto& report : reports) {
        total_reps += report.config.repetitions;
        total_excluded += report.excluded_repetitions;
        for (const auto& cell : report.cells) {
            json c;
            c["scenario"] = cheapboot::scenario_name(report.config.scenario);
            c["n"] = report.config.n;
            c["method"] = cheapboot::method_name(cell.method);
            c["B"] = cell.B;
            if (cell.available && report.effective_repetitions > 0) {
                c["coverage"] = cell.avg_coverage(report.effective_repetitions);
                c["mean_width"] = cell.avg_width(report.effective_repetitions);
            } else {
                c["na"] = true;
            }
            c["excluded_reps"] = report.excluded_repetitions;
            summary["cells"].push_back(c);
        }
        if (!report.exclusion_messages.empty()) {
            summary["exclusion_examples"] = report.exclusion_messages;
        }
    }
    cheapboot::write_text_file(out_prefix + "_summary.json", summary.dump(2) + "\n");

    json resolved = cheapboot::experiment_config_to_json(config);
    if (doc.contains("n_list")) resolved["n_list"] = doc.at("n_list");
    write_sidecar(out_prefix + ".csv", resolved);

    // Human-readable summary table.
    std::printf("%-14s %-10s %3s  %-9s %-12s %s\n", "scenario", "method", "B", "coverage",
                "mean_width", "excluded");
    for (const auto& report : reports) {
        for (const auto& cell : report.cells) {
            if (cell.available && report.effective_repetitions > 0) {
                std::printf("%-14s %-10s %3d  %-9.4f %-12.6g %zu\n",
                            cheapboot::scenario_name(report.config.scenario),
                            cheapboot::method_name(cell.method), cell.B,
                            cell.avg_coverage(report.effective_repetitions),
                            cell.avg_width(report.effective_repetitions),
                            report.excluded_repetitions);
            } else {
                std::printf("%-14s %-10s %3d  %-9s %-12s %zu\n",
                            cheapboot::scenario_name(report.config.scenario),
                            cheapboot::method_name(cell.method), cell.B, "N.A.", "N.A.",
                            report.excluded_repetitions);
            }
        }
    }

    if (10 * total_excluded > total_reps) {
        std::cerr << "error: more than 10% of repetitions errored (" << total_excluded << " of "
                  << total_reps << ")\n";
        return kExitTooManyErrors;
    }
    return kExitOk;
}

int cmd_simulate(const std::string& preset, const std::string& config_path, std::uint64_t seed,
                 int reps, const std::string& out_path) {
    if (reps < 1) {
        throw std::invalid_argument("simulate: --reps must be >= 1");
    }
    cheapboot::NetworkConfig config;
    if (!config_path.empty()) {
        config = cheapboot::network_config_from_json(cheapboot::load_json_file(config_path));
    } else {
        config = cheapboot::NetworkConfig::preset(preset);
    }
    config.validate();
    const auto models = cheapboot::InputModels::parametric(config);

    std::string csv = "run,mean_delay\n";
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
        SeedSpec s{cheapboot::mix_seed(seed, static_cast<std::uint64_t>(r)), 0, 0, 0};
        const auto out = cheapboot::simulate(models, config, s);
        csv += std::to_string(r) + "," + fmt17(out.mean_delay) + "\n";
        sum += out.mean_delay;
        sum_sq += out.mean_delay * out.mean_delay;
    }
    const double mean = sum / reps;
    const double var = reps > 1 ? (sum_sq - reps * mean * mean) / (reps - 1) : 0.0;
    const double se = reps > 1 ? std::sqrt(std::max(0.0, var) / reps) : 0.0;
    csv += "mean," + fmt17(mean) + "\n";
    csv += "standard_error," + fmt17(se) + "\n";

    std::cout << csv;
    if (!out_path.empty()) {
        cheapboot::write_text_file(out_path, csv);
        json resolved = cheapboot::network_config_to_json(config);
        resolved["seed"] = seed;
        resolved["reps"] = reps;
        write_sidecar(out_path, resolved);
    }
    return kExitOk;
}

cheapboot::GenericBoundInputs generic_inputs_from(const json& j) {
    cheapboot::GenericBoundInputs in;
    in.e1 = j.value("e1", in.e1);
    in.e2 = j.value("e2", in.e2);
    in.beta = j.value("beta", in.beta);
    in.B = j.value("B", in.B);
    in.alpha = j.value("alpha", in.alpha);
    in.e3 = j.value("e3", in.e3);
    in.e4 = j.value("e4", in.e4);
    in.sigma = j.value("sigma", in.sigma);
    return in;
}

cheapboot::ModelBoundInputs model_inputs_from(const json& j) {
    cheapboot::ModelBoundInputs in;
    in.n = j.value("n", in.n);
    in.p = j.value("p", in.p);
    in.B = j.value("B", in.B);
    in.tau = j.value("tau", in.tau);
    in.hessian_bound = j.value("hessian_bound", in.hessian_bound);
    in.grad_norm_lower = j.value("grad_norm_lower", in.grad_norm_lower);
    in.lambda_sigma = j.value("lambda_sigma", in.lambda_sigma);
    in.sigma = j.value("sigma", in.sigma);
    in.m31 = j.value("m31", in.m31);
    in.m32 = j.value("m32", in.m32);
    in.trace_sigma = j.value("trace_sigma", in.trace_sigma);
    in.third_moment_norm = j.value("third_moment_norm", in.third_moment_norm);
    in.orlicz_psi1 = j.value("orlicz_psi1", in.orlicz_psi1);
    in.third_abs_moment = j.value("third_abs_moment", in.third_abs_moment);
    in.q = j.value("q", in.q);
    in.lq_norm = j.value("lq_norm", in.lq_norm);
    in.l4_moment = j.value("l4_moment", in.l4_moment);
    in.C = j.value("C", in.C);
    in.C1 = j.value("C1", in.C1);
    return in;
}

double evaluate_theorem(const std::string& theorem, const json& inputs, std::size_t p,
                        std::size_t n, int B) {
    using cheapboot::BoundMethod;
    if (theorem == "thm1" || theorem == "thm2" || theorem == "thm6") {
        auto in = generic_inputs_from(inputs);
        in.B = B;
        if (theorem == "thm1") return cheapboot::bound_cheap_generic(in);
        if (theorem == "thm2") return cheapboot::bound_quantile_generic(in);
        return cheapboot::bound_cheap_alternative(in);
    }
    auto in = model_inputs_from(inputs);
    in.p = p;
    in.n = n;
    in.B = B;
    if (theorem == "thm3") return cheapboot::bound_function_of_mean(in, BoundMethod::cheap);
    if (theorem == "thm7") return cheapboot::bound_function_of_mean(in, BoundMethod::quantile);
    if (theorem == "thm4") return cheapboot::bound_linear_subexp(in, BoundMethod::cheap);
    if (theorem == "thm8") return cheapboot::bound_linear_subexp(in, BoundMethod::quantile);
    if (theorem == "thm5") return cheapboot::bound_linear_moment(in, BoundMethod::cheap);
    if (theorem == "thm9") return cheapboot::bound_linear_moment(in, BoundMethod::quantile);
    throw std::invalid_argument("unknown theorem selector: " + theorem);
}

int cmd_bounds(const std::string& inputs_path, const std::string& theorem,
               std::vector<std::size_t> grid_p, std::vector<std::size_t> grid_n,
               std::vector<int> grid_B, const std::string& out_path) {
    const json inputs = cheapboot::load_json_file(inputs_path);
    if (grid_p.empty()) grid_p = {inputs.value("p", std::size_t{1})};
    if (grid_n.empty()) grid_n = {inputs.value("n", std::size_t{3})};
    if (grid_B.empty()) grid_B = {inputs.value("B", 1)};

    std::string csv = "p,n,B,bound\n";
    for (std::size_t p : grid_p) {
        for (std::size_t n : grid_n) {
            for (int B : grid_B) {
                const double bound = evaluate_theorem(theorem, inputs, p, n, B);
                csv += std::to_string(p) + "," + std::to_string(n) + "," + std::to_string(B) +
                       "," + fmt17(bound) + "\n";
            }
        }
    }
    std::cout << csv;
    if (!out_path.empty()) {
        cheapboot::write_text_file(out_path, csv);
        json resolved = inputs;
        resolved["theorem"] = theorem;
        resolved["grid_p"] = grid_p;
        resolved["grid_n"] = grid_n;
        resolved["grid_B"] = grid_B;
        write_sidecar(out_path, resolved);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cheap-bootstrap confidence intervals, coverage experiments, and bounds"};
    app.require_subcommand(1);

    // ci
    auto* ci = app.add_subcommand("ci", "confidence intervals for a data file");
    std::string ci_data, ci_response, ci_out;
    EstimatorSpec ci_spec;
    int ci_B = 1;
    double ci_alpha = 0.05;
    std::uint64_t ci_seed = cheapboot::kDefaultMasterSeed;
    std::vector<std::string> ci_methods = {"cheap"};
    ci->add_option("--data", ci_data, "CSV or .bin sample file")->required();
    ci->add_option("--response", ci_response, "response column (name or index)");
    ci->add_option("--estimator", ci_spec.name,
                   "quad_norm|sinusoid_sum|linear|ols|ridge|logistic");
    ci->add_option("--g1", ci_spec.g1, "coefficients for the linear estimator");
    ci->add_option("--g2", ci_spec.g2, "offset for the linear estimator");
    ci->add_option("--lambda", ci_spec.lambda, "ridge penalty");
    ci->add_option("--l2", ci_spec.l2, "logistic l2 penalty");
    ci->add_option("--coords", ci_spec.coords, "target coordinates to report");
    ci->add_option("--B", ci_B, "number of resamples");
    ci->add_option("--alpha", ci_alpha, "1 - confidence level");
    ci->add_option("--seed", ci_seed, "master seed");
    ci->add_option("--methods", ci_methods, "interval methods");
    ci->add_option("--out", ci_out, "output JSON path");

    // width
    auto* width = app.add_subcommand("width", "expected width ratio table");
    std::vector<int> width_B = {1, 2, 5, 10};
    double width_alpha = 0.05;
    std::string width_out;
    width->add_option("--B-list", width_B, "resample counts");
    width->add_option("--alpha", width_alpha, "1 - confidence level");
    width->add_option("--out", width_out, "output CSV path");

    // coverage
    auto* coverage = app.add_subcommand("coverage", "Monte Carlo coverage experiment");
    std::string coverage_config, coverage_prefix = "coverage";
    int coverage_workers = 0;
    coverage->add_option("--config", coverage_config, "experiment config JSON")->required();
    coverage->add_option("--out-prefix", coverage_prefix, "output file prefix");
    coverage->add_option("--workers", coverage_workers, "worker threads (overrides config)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "network simulator runs");
    std::string sim_preset = "c3-exponential", sim_config, sim_out;
    std::uint64_t sim_seed = cheapboot::kDefaultMasterSeed;
    int sim_reps = 1;
    simulate->add_option("--preset", sim_preset, "c3-exponential|c3-gamma");
    simulate->add_option("--config", sim_config, "network config JSON (overrides preset)");
    simulate->add_option("--seed", sim_seed, "master seed");
    simulate->add_option("--reps", sim_reps, "number of independent runs");
    simulate->add_option("--out", sim_out, "output CSV path");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "evaluate coverage error bounds");
    std::string bounds_inputs, bounds_theorem = "thm1", bounds_out;
    std::vector<std::size_t> bounds_grid_p, bounds_grid_n;
    std::vector<int> bounds_grid_B;
    bounds->add_option("--inputs", bounds_inputs, "JSON file of named inputs")->required();
    bounds->add_option("--theorem", bounds_theorem, "thm1..thm9");
    bounds->add_option("--grid-p", bounds_grid_p, "p grid");
    bounds->add_option("--grid-n", bounds_grid_n, "n grid");
    bounds->add_option("--grid-B", bounds_grid_B, "B grid");
    bounds->add_option("--out", bounds_out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*ci) {
            return cmd_ci(ci_data, ci_response, ci_spec, ci_B, ci_alpha, ci_seed, ci_methods,
                          ci_out);
        }
        if (*width) {
            return cmd_width(width_B, width_alpha, width_out);
        }
        if (*coverage) {
            return cmd_coverage(coverage_config, coverage_prefix,
                                coverage_workers > 0 ? std::optional<int>(coverage_workers)
                                                     : std::nullopt);
        }
        if (*simulate) {
            return cmd_simulate(sim_preset, sim_config, sim_seed, sim_reps, sim_out);
        }
        if (*bounds) {
            return cmd_bounds(bounds_inputs, bounds_theorem, bounds_grid_p, bounds_grid_n,
                              bounds_grid_B, bounds_out);
        }
    } catch (const cheapboot::sim_divergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
