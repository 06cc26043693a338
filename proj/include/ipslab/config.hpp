#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipslab/bandit_flow.hpp"
#include "ipslab/hypergrid.hpp"
#include "ipslab/trainer.hpp"

namespace ipslab {

enum class Experiment {
  BanditFlow,
  BanditStochastic,
  Hypergrid,
  EqualReward,
  Ablation,
  OracleDump,
};

const char* experiment_name(Experiment e);
Experiment parse_experiment_name(const std::string& name);

// Parsed experiment description. Each experiment admits exactly its own
// config sections; the parser rejects unknown keys, wrong types, and
// out-of-range values with the full key path in the message.
struct ExperimentConfig {
  Experiment experiment = Experiment::OracleDump;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::string output_dir = "out";

  GridSpec grid;                         // hypergrid, ablation, oracle-dump
  TrainConfig train;                     // hypergrid, equal-reward, ablation
  FlowConfig flow;                       // bandit-flow; objective is set per run
  StochasticRunConfig stochastic;        // bandit-stochastic; seed is set per run
  double stochastic_init_noise = 1e-3;   // logit noise scale for stochastic inits

  std::vector<int> ablation_group_sizes = {4, 8, 16, 32, 64};
  std::vector<double> ablation_clip_epsilons = {0.01, 0.1, 0.2};
};

// Parses a strict JSON config. Throws std::runtime_error whose message
// carries the offending key path.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

// Canonical serialization of the effective config with all defaults
// materialized; equal configs serialize identically. The output directory
// is excluded so artifact bytes do not depend on where they are written.
std::string canonical_config_json(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace ipslab
