#include "cheapboot/config_io.hpp"

#include <fstream>

namespace cheapboot {

using nlohmann::json;

json network_config_to_json(const NetworkConfig& c) {
    json j;
    j["mode"] = c.mode == ArrivalMode::exponential ? "exponential" : "gamma";
    if (c.mode == ArrivalMode::exponential) {
        json rates = json::array();
        for (const auto& row : c.arrival_rate) {
            rates.push_back(std::vector<double>(row.begin(), row.end()));
        }
        j["arrival_rates"] = rates;
    } else {
        json rows = json::array();
        for (const auto& row : c.arrival_gamma) {
            json r = json::array();
            for (const auto& g : row) r.push_back({g.shape, g.rate});
            rows.push_back(r);
        }
        j["arrival_gamma"] = rows;
    }
    if (c.length_is_gamma) {
        j["message_length"] = {{"dist", "gamma"},
                               {"shape", c.length_gamma.shape},
                               {"rate", c.length_gamma.rate}};
    } else {
        j["message_length"] = {{"dist", "exponential"}, {"mean_bits", c.length_mean_bits}};
    }
    j["node_proc_time_s"] = c.node_proc_time;
    j["channel_capacity_bits"] = c.channel_capacity_bits;
    j["channel_bandwidth_bits_per_s"] = c.channel_bandwidth_bits_per_s;
    j["propagation_miles_per_s"] = c.propagation_miles_per_s;
    j["warmup_messages"] = c.warmup_messages;
    j["horizon_messages"] = c.horizon_messages;
    j["sim_time_cap_s"] = c.sim_time_cap_s;
    j["inner_runs"] = c.inner_runs;
    return j;
}

NetworkConfig network_config_from_json(const json& j) {
    NetworkConfig c;
    if (j.contains("preset")) {
        c = NetworkConfig::preset(j.at("preset").get<std::string>());
    }
    if (j.contains("mode")) {
        const auto mode = j.at("mode").get<std::string>();
        if (mode == "exponential") {
            c.mode = ArrivalMode::exponential;
        } else if (mode == "gamma") {
            c.mode = ArrivalMode::gamma;
        } else {
            throw std::invalid_argument("network config: mode must be exponential or gamma");
        }
    }
    if (j.contains("arrival_rates")) {
        const auto& rows = j.at("arrival_rates");
        for (int i = 0; i < kNumNodes; ++i) {
            for (int jj = 0; jj < kNumNodes; ++jj) {
                c.arrival_rate[i][jj] = rows.at(i).at(jj).get<double>();
            }
        }
    }
    if (j.contains("arrival_gamma")) {
        const auto& rows = j.at("arrival_gamma");
        for (int i = 0; i < kNumNodes; ++i) {
            for (int jj = 0; jj < kNumNodes; ++jj) {
                const auto& pair = rows.at(i).at(jj);
                c.arrival_gamma[i][jj] = {pair.at(0).get<double>(), pair.at(1).get<double>()};
            }
        }
    }
    if (j.contains("message_length")) {
        const auto& ml = j.at("message_length");
        const auto dist = ml.at("dist").get<std::string>();
        if (dist == "exponential") {
            c.length_is_gamma = false;
            c.length_mean_bits = ml.value("mean_bits", c.length_mean_bits);
        } else if (dist == "gamma") {
            c.length_is_gamma = true;
            c.length_gamma = {ml.at("shape").get<double>(), ml.at("rate").get<double>()};
        } else {
            throw std::invalid_argument(
                "network config: message_length.dist must be exponential or gamma");
        }
    }
    c.node_proc_time = j.value("node_proc_time_s", c.node_proc_time);
    c.channel_capacity_bits = j.value("channel_capacity_bits", c.channel_capacity_bits);
    c.channel_bandwidth_bits_per_s =
        j.value("channel_bandwidth_bits_per_s", c.channel_bandwidth_bits_per_s);
    c.propagation_miles_per_s = j.value("propagation_miles_per_s", c.propagation_miles_per_s);
    c.warmup_messages = j.value("warmup_messages", c.warmup_messages);
    c.horizon_messages = j.value("horizon_messages", c.horizon_messages);
    c.sim_time_cap_s = j.value("sim_time_cap_s", c.sim_time_cap_s);
    c.inner_runs = j.value("inner_runs", c.inner_runs);
    return c;
}

json experiment_config_to_json(const ExperimentConfig& c) {
    json j;
    j["scenario"] = scenario_name(c.scenario);
    j["n"] = c.n;
    j["p"] = c.p;
    j["B_list"] = c.B_list;
    j["alpha"] = c.alpha;
    j["repetitions"] = c.repetitions;
    std::vector<std::string> methods;
    for (auto m : c.methods) methods.emplace_back(method_name(m));
    j["methods"] = methods;
    j["master_seed"] = c.master_seed;
    j["workers"] = c.workers;
    j["ridge_lambda"] = c.ridge_lambda;
    j["logistic_l2"] = c.logistic_l2;
    switch (c.ridge_covariance) {
        case CovarianceKind::independent: j["ridge_covariance"] = "independent"; break;
        case CovarianceKind::expdecay: j["ridge_covariance"] = "expdecay"; break;
        case CovarianceKind::randcov: j["ridge_covariance"] = "randcov"; break;
    }
    if (c.target_coords) j["target_coords"] = *c.target_coords;
    if (c.scenario == Scenario::netsim) {
        j["net"] = network_config_to_json(c.net);
        j["net_sizes"] = c.net_sizes;
        if (c.netsim_truth) j["netsim_truth"] = *c.netsim_truth;
    }
    return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
    ExperimentConfig c;
    if (j.contains("scenario")) {
        c.scenario = scenario_from_name(j.at("scenario").get<std::string>());
    }
    c.n = j.value("n", c.n);
    c.p = j.value("p", c.p);
    if (j.contains("B_list")) c.B_list = j.at("B_list").get<std::vector<int>>();
    c.alpha = j.value("alpha", c.alpha);
    c.repetitions = j.value("repetitions", c.repetitions);
    if (j.contains("methods")) {
        c.methods.clear();
        for (const auto& name : j.at("methods")) {
            c.methods.push_back(method_from_name(name.get<std::string>()));
        }
    }
    c.master_seed = j.value("master_seed", c.master_seed);
    c.workers = j.value("workers", c.workers);
    c.ridge_lambda = j.value("ridge_lambda", c.ridge_lambda);
    c.logistic_l2 = j.value("logistic_l2", c.logistic_l2);
    if (j.contains("ridge_covariance")) {
        const auto kind = j.at("ridge_covariance").get<std::string>();
        if (kind == "independent") {
            c.ridge_covariance = CovarianceKind::independent;
        } else if (kind == "expdecay") {
            c.ridge_covariance = CovarianceKind::expdecay;
        } else if (kind == "randcov") {
            c.ridge_covariance = CovarianceKind::randcov;
        } else {
            throw std::invalid_argument("config: unknown ridge_covariance: " + kind);
        }
    }
    if (j.contains("target_coords")) {
        c.target_coords = j.at("target_coords").get<std::vector<std::size_t>>();
    }
    if (j.contains("net")) c.net = network_config_from_json(j.at("net"));
    if (j.contains("net_sizes")) {
        c.net_sizes = j.at("net_sizes").get<std::vector<std::size_t>>();
    }
    if (j.contains("netsim_truth")) c.netsim_truth = j.at("netsim_truth").get<double>();
    return c;
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open JSON file: " + path.string());
    }
    json j;
    in >> j;
    return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot create output file: " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed writing output file: " + path.string());
    }
}

}  // namespace cheapboot
