#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ipslab/grid_env.hpp"
#include "ipslab/simplex.hpp"

namespace ipslab {

// One sampled episode. cells[t] is the state at which actions[t] was taken;
// the final action is always Terminate, so terminal_cell == cells.back().
// logprob is the log-probability of the whole action sequence under the
// policy that sampled it.
struct Trajectory {
  std::vector<std::size_t> cells;
  std::vector<int> actions;
  std::size_t terminal_cell = 0;
  double reward = 0.0;
  double logprob = 0.0;
};

// Tabular softmax policy over a GridEnv: one logit per (cell, action id),
// stored cell-major. Invalid actions are excluded before the softmax, so
// their probability is exactly zero.
struct TabularPolicy {
  int actions_per_cell = 0;
  std::vector<double> logits;

  double logit(std::size_t cell, int action) const {
    return logits[cell * actions_per_cell + action];
  }
  double& logit(std::size_t cell, int action) {
    return logits[cell * actions_per_cell + action];
  }
};

// Fresh policy with zero logits for the increment actions and
// terminate_logit for the Terminate action at every cell.
TabularPolicy make_policy(const GridEnv& env, double terminate_logit = 0.0);

// Action distribution at a cell as a dense vector of size action_count();
// invalid action ids carry probability exactly 0.
std::vector<double> action_distribution(const GridEnv& env, const TabularPolicy& policy,
                                        std::size_t cell);

// Rolls out one episode from the origin until Terminate, drawing actions
// with a portable CDF walk so traces are reproducible across platforms.
Trajectory sample_trajectory(const GridEnv& env, const TabularPolicy& policy,
                             std::mt19937_64& rng);

// Log-probability of a trajectory's action sequence under the given policy.
double trajectory_logprob(const GridEnv& env, const TabularPolicy& policy,
                          const Trajectory& traj);

// Shannon entropy (nats) of the action distribution at a cell. Cells with a
// single valid action have entropy exactly 0.
double policy_entropy(const GridEnv& env, const TabularPolicy& policy, std::size_t cell);

// KL divergence from the action distribution at a cell to the uniform
// distribution over that cell's valid actions.
double kl_to_uniform(const GridEnv& env, const TabularPolicy& policy, std::size_t cell);

// KL divergence between the action distributions of two policies at a cell.
// Throws std::domain_error when the reference assigns zero probability to an
// action the policy uses.
double kl_to_reference(const GridEnv& env, const TabularPolicy& policy,
                       const TabularPolicy& reference, std::size_t cell);

// Exact distribution over terminal cells, computed by forward dynamic
// programming over cells in coordinate-sum order (a topological order for
// unit-increment transitions). Throws when the grid exceeds cap cells.
Simplex terminal_distribution_exact(const GridEnv& env, const TabularPolicy& policy,
                                    std::uint64_t cap = 1000000);

}  // namespace ipslab
