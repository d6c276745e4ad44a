#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hetcon/consensus.hpp"
#include "hetcon/signal.hpp"

namespace hetcon {

struct SimulationConfig {
    double dt = 1e-3;
    double t_end = 30.0;
    std::optional<std::vector<SignalSpec>> inputs;  // one per node; random when absent
    bool enforce_l2 = true;
    bool exploratory = false;
    std::optional<std::vector<double>> initial_state;
};

/// Parsed and validated network description.
struct NetworkConfig {
    Network network;
    GapOptions analysis;
    SimulationConfig simulation;
    std::uint64_t seed = 0;
    /// The input document with every default filled in.
    nlohmann::json normalized;
};

/// Throws ConfigError with a field path (or parser line/column) on any schema
/// violation, including unknown keys. Graph and transfer-function validation
/// failures are reported as ConfigError too.
NetworkConfig parse_config(const nlohmann::json& doc);
NetworkConfig parse_config_text(const std::string& text);
NetworkConfig load_config(const std::string& path);

/// One to three random finite-energy primitives (pulses, decaying sines,
/// exponential decays).
SignalSpec random_disturbance(std::mt19937_64& rng);

nlohmann::json signal_to_json(const SignalSpec& spec);

}  // namespace hetcon
