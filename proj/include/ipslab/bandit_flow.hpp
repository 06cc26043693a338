#pragma once

#include <cstdint>
#include <vector>

#include "ipslab/simplex.hpp"

namespace ipslab {

enum class Objective { ExpectedReturn, IPS };
enum class Integrator { Euler, RK4 };

// Deterministic gradient-flow run over the outcome-selection bandit.
struct FlowConfig {
  RewardVector rewards;
  Logits init_logits;
  Objective objective = Objective::ExpectedReturn;
  double step_size = 1e-2;
  double horizon = 10.0;
  Integrator integrator = Integrator::RK4;
};

// Recorded state of a flow at every integration step.
struct FlowTrace {
  std::vector<double> times;
  std::vector<Logits> logits;
  std::vector<Simplex> simplexes;
  std::vector<std::vector<double>> velocities;
  std::vector<double> potential;  // populated only for IPS runs
  Objective objective = Objective::ExpectedReturn;
};

// Sampled score-function updates on the same bandit.
struct StochasticRunConfig {
  RewardVector rewards;
  Logits init_logits;
  Objective objective = Objective::ExpectedReturn;
  int group_size = 8;
  double learning_rate = 0.1;
  int updates = 1000;
  std::uint64_t seed = 1;
  double clip_eps = 0.1;              // applied only when objective == IPS
  bool use_group_baseline = false;    // subtract the group mean reward
};

// Per-update record of a stochastic run.
struct StochasticTrace {
  std::vector<Simplex> simplexes;
  std::vector<std::vector<int>> sample_counts;  // per update, per outcome
  Simplex final_simplex;
};

// First crossing of max_i p_i above a threshold along a trace.
struct CollapseReport {
  bool collapsed = false;
  std::size_t step = 0;
  std::size_t winner = 0;
  double terminal_max_prob = 0.0;
};

// v_i = p_i * a_i(p, r).
std::vector<double> expected_return_velocity(const Simplex& p, const RewardVector& r);

// v_i = r_i - p_i * sum_k r_k.
std::vector<double> ips_velocity(const Simplex& p, const RewardVector& r);

// Integrates dz/dt = velocity(softmax(z), r) with a fixed step.
// Throws std::runtime_error naming the failing time if the state leaves
// the finite range.
FlowTrace integrate_flow(const FlowConfig& cfg);

// |central finite difference of log(p_i/p_j) - theoretical rate| at each
// interior step. The expected-return rate is p_i a_i - p_j a_j; the IPS
// rate is (r_i - r_j) - (p_i - p_j) * sum(r). A five-point central stencil
// keeps the truncation error far below the 1e-6 identity tolerance.
// Throws std::domain_error if either probability vanishes along the trace.
std::vector<double> log_ratio_residual(const FlowTrace& trace, const RewardVector& r,
                                       std::size_t i, std::size_t j);

// Psi(z) = logsumexp(z) - sum_k target_k z_k, computed with max-subtraction.
double lyapunov_potential(const Logits& z, const Simplex& target);

// p*_i = r_i / sum_k r_k. Preconditions from the reward-proportional
// stationarity result: all entries nonnegative, positive sum.
Simplex stationary_distribution(const RewardVector& r);

// On-policy sampled updates: for ExpectedReturn the update is the group
// mean of r(o) * grad log p(o); for IPS the reward is first replaced by
// r(o) / max(phat(o), eps) with phat the within-group frequency.
StochasticTrace simulate_stochastic(const StochasticRunConfig& cfg);

// Scans a sequence of simplexes for max_i p_i >= threshold.
CollapseReport detect_collapse(const std::vector<Simplex>& trace, double threshold);

}  // namespace ipslab
