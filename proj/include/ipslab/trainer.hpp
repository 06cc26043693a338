#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "ipslab/grid_env.hpp"
#include "ipslab/simplex.hpp"
#include "ipslab/tabular_policy.hpp"

namespace ipslab {

enum class Algorithm { GRPO, IPSGRPO };

struct TrainConfig {
  Algorithm algorithm = Algorithm::GRPO;
  int group_size = 16;
  double clip_eps = 0.2;  // frequency clip, used only by IPSGRPO; must lie in (0, 1]
  double learning_rate = 0.1;
  double entropy_coef = 0.01;
  double kl_coef = 0.0;
  int updates = 3000;
  std::uint64_t seed = 1;
  double ppo_clip_ratio = 0.2;
  int inner_epochs = 1;
  double init_terminate_logit = 0.0;  // Terminate logit used when the run builds its policy
};

// One group of on-policy rollouts plus their outcome bookkeeping.
struct GroupBatch {
  std::vector<Trajectory> trajectories;
  std::vector<std::size_t> outcomes;  // terminal cell per trajectory
  std::vector<double> rewards;
  std::vector<double> scaled_rewards;  // filled only when IPS scaling ran
};

struct UpdateDiagnostics {
  std::vector<double> advantages;
  double mean_entropy = 0.0;  // visit-weighted mean over the batch's visited cells
  double mean_kl = 0.0;       // same weighting, KL to uniform over valid actions
  std::size_t visited_steps = 0;
};

// Per-update record of a training run.
struct UpdateRecord {
  std::vector<std::size_t> outcomes;
  std::vector<int> mode_counts;  // group count per tracked mode
  double l1_exact = 0.0;         // l1 to target after this update's step
  double mean_entropy = 0.0;
  double mean_kl = 0.0;
  int distinct_edges = 0;  // distinct (cell, action) pairs traversed this update
};

struct RunLog {
  TrainConfig config;
  std::vector<std::size_t> tracked_modes;  // cell index per tracked mode
  std::vector<UpdateRecord> records;
  Simplex final_distribution;  // exact terminal distribution after the last update
};

// Samples G trajectories on-policy.
GroupBatch sample_group(const GridEnv& env, const TabularPolicy& policy, int group_size,
                        std::mt19937_64& rng);

// p_hat(o) = count(o) / G over the batch's outcomes.
std::map<std::size_t, double> empirical_outcome_frequencies(const GroupBatch& batch);

// r_g / max(p_hat(o_g), eps); trajectories sharing an outcome get equal
// scaled rewards.
std::vector<double> ips_scale_rewards(const GroupBatch& batch, double eps);

// Group-relative advantages (r - mean) / (std + 1e-8) with population
// standard deviation; an all-equal group yields exact zeros.
std::vector<double> group_advantages(const std::vector<double>& rewards);

// One policy update from an on-policy batch: group advantages (IPS-scaled
// first for IPSGRPO), PPO-clipped surrogate with per-trajectory probability
// ratios, entropy bonus, and KL penalty to the uniform-over-valid reference,
// all with closed-form softmax gradients. Throws std::invalid_argument when
// the batch's stored logprobs disagree with the current policy.
UpdateDiagnostics grpo_update(const GridEnv& env, TabularPolicy& policy,
                              const GroupBatch& batch, const TrainConfig& cfg);

// Full training run: cfg.updates iterations of sample, update, measure.
// target is the reference terminal distribution for the per-update l1;
// tracked_modes lists the cells whose group counts are logged.
RunLog train(const GridEnv& env, const Simplex& target,
             const std::vector<std::size_t>& tracked_modes, TabularPolicy& policy,
             const TrainConfig& cfg, std::mt19937_64& rng);

}  // namespace ipslab
