#pragma once

#include "pouw/chains.hpp"
#include "pouw/retarget.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pouw {

enum class Strategy { Honest, Selfish };
enum class MiningModel {
    Abstract, ///< Poisson block discovery, no real proof of work
    Real,     ///< discovery times as in Abstract, but every block is actually mined and validated
};

struct NodeConfig {
    double share = 1.0;
    Strategy strategy = Strategy::Honest;
};

struct DelayModel {
    enum class Kind { Fixed, Uniform };
    Kind kind = Kind::Fixed;
    std::uint64_t min_ticks = 0; ///< the fixed delay when kind == Fixed
    std::uint64_t max_ticks = 0;
};

/// Multiplies total compute once `at_block` blocks have been produced.
struct ComputeChange {
    std::uint64_t at_block = 0;
    double factor = 1.0;
};

struct SimConfig {
    std::vector<NodeConfig> nodes;
    DelayModel delay;
    double gamma = 0.0; ///< share of honest nodes that pick the selfish side of a tie
    std::uint64_t blocks = 1000; ///< stop after this many blocks are produced
    RetargetConfig retarget;     ///< target_spacing lives here
    bool retarget_enabled = true;
    FixedLength initial_target = FixedLength::from_parts(2, 0);
    std::uint64_t seed = 1;
    MiningModel mining = MiningModel::Abstract;
    std::vector<ComputeChange> compute_changes;

    /// Throws std::invalid_argument on inconsistent settings.
    void check() const;
};

struct SimMetrics {
    std::vector<std::uint64_t> produced;      ///< per node
    std::vector<std::uint64_t> in_best_chain; ///< per node
    std::vector<double> revenue_share;        ///< per node
    std::uint64_t total_produced = 0;
    std::uint64_t best_chain_length = 0; ///< genesis excluded
    std::uint64_t orphans = 0;
    double mean_interval = 0.0;
    double stddev_interval = 0.0;
    std::map<std::uint64_t, std::uint64_t> reorg_depths; ///< depth -> count, observer view
    std::vector<std::uint64_t> best_chain_timestamps;    ///< index = height, genesis at 0
    std::vector<int> best_chain_producers;               ///< index = height - 1
    std::vector<double> best_chain_targets;              ///< index = height - 1
};

/// Event-driven network run; deterministic for a fixed config.
SimMetrics run_simulation(const SimConfig& config);

/// Blocks in the best chain per node over the chain length.
std::vector<double> revenue_share(const SimMetrics& metrics);

/// Mean timestamp delta over best-chain blocks with heights in [from, to].
double mean_interval(const SimMetrics& metrics, std::uint64_t from_height, std::uint64_t to_height);

// Structured text form (JSON), accepted and produced by the CLI.
SimConfig sim_config_from_json(const std::string& text);
std::string sim_config_to_json(const SimConfig& config);
std::string sim_metrics_to_json(const SimMetrics& metrics);
std::string sim_metrics_table(const SimMetrics& metrics, const SimConfig& config);

} // namespace pouw
