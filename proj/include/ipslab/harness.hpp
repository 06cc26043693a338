#pragma once

#include "ipslab/config.hpp"

namespace ipslab {

struct HarnessOptions {
  bool dry_run = false;
  int jobs = 1;
};

// Each runner writes its artifacts under cfg.output_dir and returns whether
// every configured check passed. Dry runs echo the config and oracle stats
// without training or writing artifacts.
bool run_bandit_flow(const ExperimentConfig& cfg, const HarnessOptions& opts);
bool run_bandit_stochastic(const ExperimentConfig& cfg, const HarnessOptions& opts);
bool run_hypergrid(const ExperimentConfig& cfg, const HarnessOptions& opts);
bool run_equal_reward(const ExperimentConfig& cfg, const HarnessOptions& opts);
bool run_ablation(const ExperimentConfig& cfg, const HarnessOptions& opts);
bool run_oracle_dump(const ExperimentConfig& cfg, const HarnessOptions& opts);

// Dispatches on cfg.experiment; returns the process exit code (0 only if
// all configured checks passed).
int run_experiment(const ExperimentConfig& cfg, const HarnessOptions& opts);

}  // namespace ipslab
