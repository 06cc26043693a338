#include "ipslab/tabular_policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ipslab/rng.hpp"

namespace ipslab {

TabularPolicy make_policy(const GridEnv& env, double terminate_logit) {
  TabularPolicy policy;
  policy.actions_per_cell = env.action_count();
  policy.logits.assign(env.cell_count() * env.action_count(), 0.0);
  for (std::size_t cell = 0; cell < env.cell_count(); ++cell)
    policy.logit(cell, env.terminate_action()) = terminate_logit;
  return policy;
}

std::vector<double> action_distribution(const GridEnv& env, const TabularPolicy& policy,
                                        std::size_t cell) {
  const std::vector<int> valid = env.valid_action_ids(cell);
  std::vector<double> dist(env.action_count(), 0.0);
  if (valid.size() == 1) {
    dist[valid[0]] = 1.0;
    return dist;
  }
  Logits masked(valid.size());
  for (std::size_t k = 0; k < valid.size(); ++k) masked[k] = policy.logit(cell, valid[k]);
  const Simplex p = softmax(masked);
  for (std::size_t k = 0; k < valid.size(); ++k) dist[valid[k]] = p[k];
  return dist;
}

Trajectory sample_trajectory(const GridEnv& env, const TabularPolicy& policy,
                             std::mt19937_64& rng) {
  Trajectory traj;
  std::size_t cell = 0;
  for (;;) {
    const std::vector<double> dist = action_distribution(env, policy, cell);
    const int action = static_cast<int>(sample_index(dist, rng));
    traj.cells.push_back(cell);
    traj.actions.push_back(action);
    traj.logprob += std::log(dist[action]);
    if (action == env.terminate_action()) {
      traj.terminal_cell = cell;
      traj.reward = env.reward[cell];
      return traj;
    }
    cell = env.next_cell(cell, action);
  }
}

double trajectory_logprob(const GridEnv& env, const TabularPolicy& policy,
                          const Trajectory& traj) {
  if (traj.cells.size() != traj.actions.size())
    throw std::invalid_argument("trajectory_logprob: cells and actions lengths differ");
  double lp = 0.0;
  for (std::size_t t = 0; t < traj.cells.size(); ++t) {
    const std::vector<double> dist = action_distribution(env, policy, traj.cells[t]);
    const double p = dist[traj.actions[t]];
    if (p <= 0.0)
      throw std::domain_error("trajectory_logprob: trajectory takes an invalid action");
    lp += std::log(p);
  }
  return lp;
}

double policy_entropy(const GridEnv& env, const TabularPolicy& policy, std::size_t cell) {
  const std::vector<double> dist = action_distribution(env, policy, cell);
  double h = 0.0;
  for (double p : dist)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

double kl_to_uniform(const GridEnv& env, const TabularPolicy& policy, std::size_t cell) {
  const std::vector<double> dist = action_distribution(env, policy, cell);
  const double m = static_cast<double>(env.valid_action_ids(cell).size());
  double kl = 0.0;
  for (double p : dist)
    if (p > 0.0) kl += p * std::log(p * m);
  return kl;
}

double kl_to_reference(const GridEnv& env, const TabularPolicy& policy,
                       const TabularPolicy& reference, std::size_t cell) {
  const std::vector<double> p = action_distribution(env, policy, cell);
  const std::vector<double> q = action_distribution(env, reference, cell);
  double kl = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a] <= 0.0) continue;
    if (q[a] <= 0.0)
      throw std::domain_error("kl_to_reference: reference excludes action " +
                              std::to_string(a) + " at cell " + std::to_string(cell));
    kl += p[a] * std::log(p[a] / q[a]);
  }
  return kl;
}

Simplex terminal_distribution_exact(const GridEnv& env, const TabularPolicy& policy,
                                    std::uint64_t cap) {
  const std::size_t cells = env.cell_count();
  if (cells > cap)
    throw std::runtime_error("terminal_distribution_exact: grid exceeds the cell cap");

  std::vector<std::size_t> order(cells);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> coord_sum(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const Coords x = env.coords(i);
    coord_sum[i] = std::accumulate(x.begin(), x.end(), 0);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return coord_sum[a] < coord_sum[b]; });

  std::vector<double> mass(cells, 0.0);
  Simplex terminal(cells, 0.0);
  mass[0] = 1.0;
  for (std::size_t cell : order) {
    if (mass[cell] == 0.0) continue;
    const std::vector<double> dist = action_distribution(env, policy, cell);
    terminal[cell] += mass[cell] * dist[env.terminate_action()];
    for (int a = 0; a < env.n; ++a)
      if (dist[a] > 0.0) mass[env.next_cell(cell, a)] += mass[cell] * dist[a];
  }
  return terminal;
}

}  // namespace ipslab
