#ifndef CHEAPBOOT_NETSIM_HPP
#define CHEAPBOOT_NETSIM_HPP

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cheapboot/rng.hpp"
#include "cheapboot/sample.hpp"

namespace cheapboot {

// Four message-processing nodes joined in a ring by four transport
// channels (channel i connects node i and node i mod 4 + 1, 1-indexed).
// External messages enter at node i bound for node j along the minimum-hop
// path; the two-hop pairs route through the lower-numbered intermediate
// node. Every node on the path, endpoints included, charges one processing
// time. A channel transmits serially at the configured bandwidth, then the
// message propagates over the channel length; channel storage is reserved
// from transmission start to full exit.

inline constexpr int kNumNodes = 4;
inline constexpr int kNumChannels = 4;
inline constexpr std::size_t kNumSources = 13;  // 12 ordered node pairs + message length

struct GammaParams {
    double shape = 1.0;
    double rate = 1.0;
};

enum class ArrivalMode { exponential, gamma };

struct NetworkConfig {
    ArrivalMode mode = ArrivalMode::exponential;
    // Indexed [i-1][j-1]; diagonal unused.
    std::array<std::array<double, 4>, 4> arrival_rate{};
    std::array<std::array<GammaParams, 4>, 4> arrival_gamma{};

    bool length_is_gamma = false;
    double length_mean_bits = 300.0;              // exponential mode
    GammaParams length_gamma{2.5, 1.0 / 200.0};   // gamma mode

    double node_proc_time = 0.001;
    double channel_capacity_bits = 275000.0;
    double channel_bandwidth_bits_per_s = 275000.0;
    double propagation_miles_per_s = 150000.0;
    std::size_t warmup_messages = 500;
    std::size_t horizon_messages = 10000;
    double sim_time_cap_s = 1e6;
    int inner_runs = 1;  // simulation runs averaged per estimator evaluation

    double channel_length_miles(int channel) const { return 100.0 * channel; }

    void validate() const;

    // Ground-truth parameter sets used in the reference experiments.
    static NetworkConfig preset(const std::string& name);  // "c3-exponential", "c3-gamma"
};

// Ordered node pairs (i, j), i != j, in row-major order; index 12 is the
// message-length source.
std::size_t pair_source_index(int from_node, int to_node);

// One of the 13 stochastic inputs: a parametric distribution or the
// empirical distribution of observed data (redrawn with replacement during
// the run). Empirical samplers view caller-owned data.
class InputSampler {
  public:
    static InputSampler exponential(double rate);
    static InputSampler gamma(GammaParams params);
    static InputSampler empirical(std::span<const double> data);

    double draw(CounterStream& stream) const;

  private:
    enum class Kind { exponential, gamma, empirical };
    Kind kind_ = Kind::exponential;
    double rate_ = 1.0;
    GammaParams gamma_{};
    std::span<const double> data_;
};

struct InputModels {
    std::vector<InputSampler> samplers;  // exactly kNumSources

    // Parametric samplers from the configured ground truth.
    static InputModels parametric(const NetworkConfig& config);
    // Empirical samplers over 13 observed data sources.
    static InputModels empirical(const MultiSourceSample& data);
};

struct MessageRecord {
    int from_node = 0;
    int to_node = 0;
    double length_bits = 0.0;
    double delay_s = 0.0;
};

struct SimOutput {
    double mean_delay = 0.0;         // average of delays warmup+1 .. horizon
    std::size_t delivered_count = 0; // all deliveries until termination

    // Invariant monitors, accumulated during the run.
    double max_channel_occupancy_bits = 0.0;
    std::size_t fifo_violations = 0;
    std::size_t conservation_violations = 0;

    std::vector<MessageRecord> trace;  // first `horizon` messages, if recorded
};

struct SimOptions {
    bool record_trace = false;
};

class sim_divergence_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Runs the event loop until every one of the first horizon_messages
// external arrivals has been delivered, then averages the delays of
// messages warmup+1..horizon (delay = delivery time minus network entry
// time). Bit-identical output for identical (models, config, seed).
// Throws sim_divergence_error if simulated time passes sim_time_cap_s.
SimOutput simulate(const InputModels& models, const NetworkConfig& config, const SeedSpec& seed,
                   const SimOptions& options = {});

// The functional psi plugged into the bootstrap: builds empirical input
// models over 13 positive data sources and returns the mean of
// config.inner_runs simulated mean delays.
double delay_estimator(const MultiSourceSample& data, const NetworkConfig& config,
                       const SeedSpec& inner_seed);

// Draws i.i.d. observations from the configured parametric ground truth,
// sizes[j] values for source j.
MultiSourceSample generate_input_data(const NetworkConfig& config,
                                      std::span<const std::size_t> sizes, const SeedSpec& seed);

}  // namespace cheapboot

#endif
