#include "cheapboot/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

#include "cheapboot/variates.hpp"

namespace cheapboot {

void NetworkConfig::validate() const {
    for (int i = 0; i < kNumNodes; ++i) {
        for (int j = 0; j < kNumNodes; ++j) {
            if (i == j) continue;
            if (mode == ArrivalMode::exponential) {
                if (!(arrival_rate[i][j] > 0.0)) {
                    throw std::invalid_argument("NetworkConfig: arrival rate for pair (" +
                                                std::to_string(i + 1) + "," +
                                                std::to_string(j + 1) + ") must be positive");
                }
            } else {
                const auto& g = arrival_gamma[i][j];
                if (!(g.shape > 0.0 && g.rate > 0.0)) {
                    throw std::invalid_argument("NetworkConfig: gamma parameters for pair (" +
                                                std::to_string(i + 1) + "," +
                                                std::to_string(j + 1) + ") must be positive");
                }
            }
        }
    }
    if (length_is_gamma) {
        if (!(length_gamma.shape > 0.0 && length_gamma.rate > 0.0)) {
            throw std::invalid_argument("NetworkConfig: message length gamma parameters must be positive");
        }
    } else if (!(length_mean_bits > 0.0)) {
        throw std::invalid_argument("NetworkConfig: message length mean must be positive");
    }
    if (!(node_proc_time >= 0.0) || !(channel_capacity_bits > 0.0) ||
        !(channel_bandwidth_bits_per_s > 0.0) || !(propagation_miles_per_s > 0.0)) {
        throw std::invalid_argument("NetworkConfig: nonpositive timing/capacity parameter");
    }
    if (horizon_messages <= warmup_messages) {
        throw std::invalid_argument("NetworkConfig: horizon must exceed warmup");
    }
    if (inner_runs < 1) {
        throw std::invalid_argument("NetworkConfig: inner_runs must be >= 1");
    }
}

NetworkConfig NetworkConfig::preset(const std::string& name) {
    NetworkConfig cfg;
    if (name == "c3-exponential") {
        cfg.mode = ArrivalMode::exponential;
        cfg.arrival_rate = {{{0, 40, 30, 35},  //
                             {50, 0, 45, 15},
                             {60, 15, 0, 20},
                             {25, 30, 40, 0}}};
        cfg.length_is_gamma = false;
        cfg.length_mean_bits = 300.0;
        return cfg;
    }
    if (name == "c3-gamma") {
        cfg.mode = ArrivalMode::gamma;
        cfg.arrival_gamma = {{{{{0, 0}, {1.5, 60}, {0.7, 40}, {1.3, 50}}},
                              {{{2, 80}, {0, 0}, {1.5, 65}, {0.6, 20}}},
                              {{{3, 100}, {0.5, 25}, {0, 0}, {1.2, 30}}},
                              {{{0.8, 40}, {1.1, 50}, {0.9, 35}, {0, 0}}}}};
        cfg.length_is_gamma = true;
        cfg.length_gamma = {2.5, 1.0 / 200.0};
        return cfg;
    }
    throw std::invalid_argument("unknown network preset: " + name);
}

std::size_t pair_source_index(int from_node, int to_node) {
    if (from_node < 1 || from_node > 4 || to_node < 1 || to_node > 4 || from_node == to_node) {
        throw std::invalid_argument("pair_source_index: nodes must be distinct and in 1..4");
    }
    return static_cast<std::size_t>((from_node - 1) * 3 + (to_node - 1) -
                                    (to_node > from_node ? 1 : 0));
}

InputSampler InputSampler::exponential(double rate) {
    InputSampler s;
    s.kind_ = Kind::exponential;
    s.rate_ = rate;
    return s;
}

InputSampler InputSampler::gamma(GammaParams params) {
    InputSampler s;
    s.kind_ = Kind::gamma;
    s.gamma_ = params;
    return s;
}

InputSampler InputSampler::empirical(std::span<const double> data) {
    InputSampler s;
    s.kind_ = Kind::empirical;
    s.data_ = data;
    return s;
}

double InputSampler::draw(CounterStream& stream) const {
    switch (kind_) {
        case Kind::exponential:
            return draw_exponential(stream, rate_);
        case Kind::gamma:
            return draw_gamma(stream, gamma_.shape, gamma_.rate);
        case Kind::empirical:
            return data_[static_cast<std::size_t>(stream.bounded(data_.size()))];
    }
    return 0.0;
}

InputModels InputModels::parametric(const NetworkConfig& config) {
    config.validate();
    InputModels models;
    models.samplers.reserve(kNumSources);
    for (int i = 1; i <= kNumNodes; ++i) {
        for (int j = 1; j <= kNumNodes; ++j) {
            if (i == j) continue;
            if (config.mode == ArrivalMode::exponential) {
                models.samplers.push_back(
                    InputSampler::exponential(config.arrival_rate[i - 1][j - 1]));
            } else {
                models.samplers.push_back(
                    InputSampler::gamma(config.arrival_gamma[i - 1][j - 1]));
            }
        }
    }
    if (config.length_is_gamma) {
        models.samplers.push_back(InputSampler::gamma(config.length_gamma));
    } else {
        models.samplers.push_back(InputSampler::exponential(1.0 / config.length_mean_bits));
    }
    return models;
}

InputModels InputModels::empirical(const MultiSourceSample& data) {
    if (data.n_sources() != kNumSources) {
        throw std::invalid_argument("InputModels::empirical: expected " +
                                    std::to_string(kNumSources) + " sources, got " +
                                    std::to_string(data.n_sources()));
    }
    InputModels models;
    models.samplers.reserve(kNumSources);
    for (std::size_t j = 0; j < kNumSources; ++j) {
        models.samplers.push_back(InputSampler::empirical(data.source(j)));
    }
    return models;
}

namespace {

// Ring topology tables, all 0-indexed. Channel c joins nodes c and (c+1)%4.
struct Topology {
    // route[s][d] = node sequence (2 or 3 entries); the two-hop pairs go
    // through the lower-numbered intermediate.
    std::array<std::array<std::array<int, 3>, 4>, 4> route{};
    std::array<std::array<int, 4>, 4> route_len{};
    std::array<std::array<int, 4>, 4> channel{};  // channel joining adjacent nodes

    Topology() {
        for (auto& row : channel) row.fill(-1);
        for (int c = 0; c < kNumChannels; ++c) {
            const int u = c, v = (c + 1) % kNumNodes;
            channel[u][v] = c;
            channel[v][u] = c;
        }
        for (int s = 0; s < kNumNodes; ++s) {
            for (int d = 0; d < kNumNodes; ++d) {
                if (s == d) continue;
                if (channel[s][d] >= 0) {
                    route[s][d] = {s, d, -1};
                    route_len[s][d] = 2;
                } else {
                    const int m1 = (s + 1) % kNumNodes;
                    const int m2 = (s + 3) % kNumNodes;
                    const int mid = std::min(m1, m2);
                    route[s][d] = {s, mid, d};
                    route_len[s][d] = 3;
                }
            }
        }
    }
};

const Topology& topology() {
    static const Topology topo;
    return topo;
}

enum class EventKind : int {
    // Priority order at equal times: departures before arrivals.
    tx_done = 0,
    channel_exit = 1,
    node_done = 2,
    external_arrival = 3,
};

struct Event {
    double time;
    int priority;
    std::uint64_t seq;
    EventKind kind;
    int place;  // node, channel, or pair index depending on kind
    int msg;    // message slot; -1 for external arrivals

    bool operator>(const Event& other) const {
        if (time != other.time) return time > other.time;
        if (priority != other.priority) return priority > other.priority;
        return seq > other.seq;
    }
};

struct Message {
    int from, to;
    double length;
    double t_enter;
    int hop = 0;  // index into the route of the node currently handling it
};

struct NodeState {
    std::deque<int> queue;
    bool busy = false;
};

struct ChannelState {
    std::deque<int> waiting;     // output queue, FIFO
    std::deque<int> in_transit;  // transmission-start order, for the FIFO check
    double occupied_bits = 0.0;
    bool tx_busy = false;
};

struct Engine {
    const NetworkConfig& config;
    const InputModels& models;
    SimOptions options;

    std::vector<CounterStream> streams;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
    std::uint64_t next_seq = 0;

    std::vector<Message> messages;
    std::array<NodeState, kNumNodes> nodes;
    std::array<ChannelState, kNumChannels> channels;

    std::size_t generated = 0;
    std::size_t delivered = 0;
    std::size_t delivered_in_horizon = 0;
    std::vector<double> horizon_delays;
    SimOutput out;

    // Per-pair node endpoints, aligned with the sampler order.
    std::array<std::pair<int, int>, 12> pair_nodes{};

    Engine(const InputModels& m, const NetworkConfig& cfg, const SeedSpec& seed,
           const SimOptions& opts)
        : config(cfg), models(m), options(opts) {
        if (models.samplers.size() != kNumSources) {
            throw std::invalid_argument("simulate: expected 13 input samplers");
        }
        streams.reserve(kNumSources);
        for (std::size_t j = 0; j < kNumSources; ++j) {
            streams.emplace_back(seed.with_source(j), StreamKind::simulation);
        }
        std::size_t k = 0;
        for (int i = 0; i < kNumNodes; ++i) {
            for (int j = 0; j < kNumNodes; ++j) {
                if (i == j) continue;
                pair_nodes[k++] = {i, j};
            }
        }
        horizon_delays.assign(config.horizon_messages, 0.0);
    }

    void push(double time, EventKind kind, int place, int msg) {
        events.push({time, static_cast<int>(kind), next_seq++, kind, place, msg});
    }

    void schedule_arrival(std::size_t pair, double now) {
        push(now + models.samplers[pair].draw(streams[pair]), EventKind::external_arrival,
             static_cast<int>(pair), -1);
    }

    double draw_length() { return models.samplers[12].draw(streams[12]); }

    void node_enqueue(int node, int msg, double now) {
        auto& st = nodes[node];
        if (!st.busy) {
            st.busy = true;
            push(now + config.node_proc_time, EventKind::node_done, node, msg);
        } else {
            st.queue.push_back(msg);
        }
    }

    void try_start_tx(int channel, double now) {
        auto& ch = channels[channel];
        if (ch.tx_busy || ch.waiting.empty()) return;
        const int msg = ch.waiting.front();
        const double len = messages[msg].length;
        if (len > config.channel_capacity_bits) {
            throw sim_divergence_error("simulate: message of " + std::to_string(len) +
                                       " bits can never fit channel capacity");
        }
        if (ch.occupied_bits + len > config.channel_capacity_bits) return;  // head blocked
        ch.waiting.pop_front();
        ch.occupied_bits += len;
        out.max_channel_occupancy_bits = std::max(out.max_channel_occupancy_bits, ch.occupied_bits);
        ch.tx_busy = true;
        ch.in_transit.push_back(msg);
        push(now + len / config.channel_bandwidth_bits_per_s, EventKind::tx_done, channel, msg);
    }

    void forward_from_node(int node, int msg, double now) {
        auto& m = messages[msg];
        const auto& topo = topology();
        const auto& route = topo.route[m.from][m.to];
        const int route_len = topo.route_len[m.from][m.to];
        if (route[m.hop] != node) {
            throw std::logic_error("simulate: message routed to an unexpected node");
        }
        if (m.hop == route_len - 1) {
            // Delivered: processing at the destination is complete.
            ++delivered;
            const double delay = now - m.t_enter;
            const auto k = static_cast<std::size_t>(msg) + 1;
            if (k <= config.horizon_messages) {
                horizon_delays[k - 1] = delay;
                ++delivered_in_horizon;
                if (options.record_trace) {
                    out.trace[k - 1].delay_s = delay;
                }
            }
            return;
        }
        const int next = route[m.hop + 1];
        const int channel = topo.channel[node][next];
        channels[channel].waiting.push_back(msg);
        try_start_tx(channel, now);
    }

    void check_conservation() {
        std::size_t in_system = 0;
        for (const auto& st : nodes) {
            in_system += st.queue.size() + (st.busy ? 1 : 0);
        }
        for (const auto& ch : channels) {
            in_system += ch.waiting.size() + ch.in_transit.size();
        }
        if (generated != delivered + in_system) {
            ++out.conservation_violations;
        }
    }

    SimOutput run() {
        for (std::size_t pair = 0; pair < 12; ++pair) {
            schedule_arrival(pair, 0.0);
        }
        if (options.record_trace) {
            out.trace.assign(config.horizon_messages, MessageRecord{});
        }

        while (delivered_in_horizon < config.horizon_messages) {
            if (events.empty()) {
                throw sim_divergence_error("simulate: event queue drained before horizon");
            }
            const Event ev = events.top();
            events.pop();
            if (ev.time > config.sim_time_cap_s) {
                throw sim_divergence_error("simulate: simulated time exceeded the cap of " +
                                           std::to_string(config.sim_time_cap_s) + " s");
            }
            switch (ev.kind) {
                case EventKind::external_arrival: {
                    const auto pair = static_cast<std::size_t>(ev.place);
                    const int msg = static_cast<int>(messages.size());
                    const auto [from, to] = pair_nodes[pair];
                    messages.push_back({from, to, draw_length(), ev.time});
                    ++generated;
                    const auto k = static_cast<std::size_t>(msg) + 1;
                    if (options.record_trace && k <= config.horizon_messages) {
                        auto& rec = out.trace[k - 1];
                        rec.from_node = from + 1;
                        rec.to_node = to + 1;
                        rec.length_bits = messages[msg].length;
                    }
                    node_enqueue(from, msg, ev.time);
                    schedule_arrival(pair, ev.time);
                    break;
                }
                case EventKind::node_done: {
                    auto& st = nodes[ev.place];
                    st.busy = false;
                    if (!st.queue.empty()) {
                        const int next_msg = st.queue.front();
                        st.queue.pop_front();
                        st.busy = true;
                        push(ev.time + config.node_proc_time, EventKind::node_done, ev.place,
                             next_msg);
                    }
                    forward_from_node(ev.place, ev.msg, ev.time);
                    break;
                }
                case EventKind::tx_done: {
                    auto& ch = channels[ev.place];
                    ch.tx_busy = false;
                    push(ev.time + config.channel_length_miles(ev.place + 1) /
                                       config.propagation_miles_per_s,
                         EventKind::channel_exit, ev.place, ev.msg);
                    try_start_tx(ev.place, ev.time);
                    break;
                }
                case EventKind::channel_exit: {
                    auto& ch = channels[ev.place];
                    if (ch.in_transit.empty() || ch.in_transit.front() != ev.msg) {
                        ++out.fifo_violations;
                    } else {
                        ch.in_transit.pop_front();
                    }
                    ch.occupied_bits -= messages[ev.msg].length;
                    auto& m = messages[ev.msg];
                    ++m.hop;
                    const auto& topo = topology();
                    node_enqueue(topo.route[m.from][m.to][m.hop], ev.msg, ev.time);
                    try_start_tx(ev.place, ev.time);
                    break;
                }
            }
            check_conservation();
        }

        double sum = 0.0;
        for (std::size_t k = config.warmup_messages; k < config.horizon_messages; ++k) {
            sum += horizon_delays[k];
        }
        out.mean_delay =
            sum / static_cast<double>(config.horizon_messages - config.warmup_messages);
        out.delivered_count = delivered;
        return std::move(out);
    }
};

}  // namespace

SimOutput simulate(const InputModels& models, const NetworkConfig& config, const SeedSpec& seed,
                   const SimOptions& options) {
    config.validate();
    Engine engine(models, config, seed, options);
    return engine.run();
}

double delay_estimator(const MultiSourceSample& data, const NetworkConfig& config,
                       const SeedSpec& inner_seed) {
    if (data.n_sources() != kNumSources) {
        throw std::invalid_argument("delay_estimator: expected 13 data sources");
    }
    for (std::size_t j = 0; j < data.n_sources(); ++j) {
        for (double v : data.source(j)) {
            if (!(v > 0.0)) {
                throw std::invalid_argument("delay_estimator: source " + std::to_string(j) +
                                            " contains a nonpositive observation");
            }
        }
    }
    const InputModels models = InputModels::empirical(data);
    double total = 0.0;
    for (int run = 0; run < config.inner_runs; ++run) {
        SeedSpec seed = inner_seed;
        seed.master_seed = mix_seed(inner_seed.master_seed, 0xC3u + static_cast<std::uint64_t>(run));
        total += simulate(models, config, seed).mean_delay;
    }
    return total / static_cast<double>(config.inner_runs);
}

MultiSourceSample generate_input_data(const NetworkConfig& config,
                                      std::span<const std::size_t> sizes, const SeedSpec& seed) {
    config.validate();
    if (sizes.size() != kNumSources) {
        throw std::invalid_argument("generate_input_data: expected 13 sizes");
    }
    const InputModels models = InputModels::parametric(config);
    std::vector<std::vector<double>> sources;
    sources.reserve(kNumSources);
    for (std::size_t j = 0; j < kNumSources; ++j) {
        if (sizes[j] < 1) {
            throw std::invalid_argument("generate_input_data: sizes must be >= 1");
        }
        CounterStream stream(seed.with_source(j), StreamKind::data);
        std::vector<double> values(sizes[j]);
        for (auto& v : values) {
            v = models.samplers[j].draw(stream);
        }
        sources.push_back(std::move(values));
    }
    return MultiSourceSample(std::move(sources));
}

}  // namespace cheapboot
