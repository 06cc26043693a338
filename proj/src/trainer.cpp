#include "ipslab/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace ipslab {

namespace {

void validate(const TrainConfig& cfg) {
  if (cfg.group_size < 1) throw std::invalid_argument("TrainConfig: need group_size >= 1");
  if (cfg.algorithm == Algorithm::IPSGRPO &&
      (cfg.clip_eps <= 0.0 || cfg.clip_eps > 1.0))
    throw std::invalid_argument("TrainConfig: clip_eps must lie in (0, 1]");
  if (cfg.learning_rate <= 0.0)
    throw std::invalid_argument("TrainConfig: learning_rate must be positive");
  if (cfg.entropy_coef < 0.0)
    throw std::invalid_argument("TrainConfig: entropy_coef must be nonnegative");
  if (cfg.kl_coef < 0.0) throw std::invalid_argument("TrainConfig: kl_coef must be nonnegative");
  if (cfg.updates < 0) throw std::invalid_argument("TrainConfig: updates must be nonnegative");
  if (cfg.ppo_clip_ratio <= 0.0)
    throw std::invalid_argument("TrainConfig: ppo_clip_ratio must be positive");
  if (cfg.inner_epochs < 1)
    throw std::invalid_argument("TrainConfig: need inner_epochs >= 1");
}

}  // namespace

GroupBatch sample_group(const GridEnv& env, const TabularPolicy& policy, int group_size,
                        std::mt19937_64& rng) {
  if (group_size < 1) throw std::invalid_argument("sample_group: need group_size >= 1");
  GroupBatch batch;
  batch.trajectories.reserve(group_size);
  batch.outcomes.reserve(group_size);
  batch.rewards.reserve(group_size);
  for (int g = 0; g < group_size; ++g) {
    batch.trajectories.push_back(sample_trajectory(env, policy, rng));
    batch.outcomes.push_back(batch.trajectories.back().terminal_cell);
    batch.rewards.push_back(batch.trajectories.back().reward);
  }
  return batch;
}

std::map<std::size_t, double> empirical_outcome_frequencies(const GroupBatch& batch) {
  if (batch.outcomes.empty())
    throw std::invalid_argument("empirical_outcome_frequencies: empty batch");
  std::map<std::size_t, int> counts;
  for (std::size_t o : batch.outcomes) counts[o]++;
  const double G = static_cast<double>(batch.outcomes.size());
  std::map<std::size_t, double> freq;
  for (const auto& [o, c] : counts) freq[o] = static_cast<double>(c) / G;
  return freq;
}

std::vector<double> ips_scale_rewards(const GroupBatch& batch, double eps) {
  if (eps <= 0.0 || eps > 1.0)
    throw std::invalid_argument("ips_scale_rewards: eps must lie in (0, 1]");
  const auto freq = empirical_outcome_frequencies(batch);
  std::vector<double> scaled(batch.rewards.size());
  for (std::size_t g = 0; g < batch.rewards.size(); ++g)
    scaled[g] = batch.rewards[g] / std::max(freq.at(batch.outcomes[g]), eps);
  return scaled;
}

std::vector<double> group_advantages(const std::vector<double>& rewards) {
  if (rewards.empty()) throw std::invalid_argument("group_advantages: empty group");
  const std::size_t G = rewards.size();
  bool all_equal = true;
  for (std::size_t g = 1; g < G; ++g) all_equal = all_equal && (rewards[g] == rewards[0]);
  std::vector<double> adv(G, 0.0);
  if (all_equal) return adv;
  const double mean =
      std::accumulate(rewards.begin(), rewards.end(), 0.0) / static_cast<double>(G);
  double var = 0.0;
  for (double v : rewards) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(G));
  for (std::size_t g = 0; g < G; ++g) adv[g] = (rewards[g] - mean) / (sd + 1e-8);
  return adv;
}

UpdateDiagnostics grpo_update(const GridEnv& env, TabularPolicy& policy,
                              const GroupBatch& batch, const TrainConfig& cfg) {
  validate(cfg);
  const std::size_t G = batch.trajectories.size();
  if (G == 0) throw std::invalid_argument("grpo_update: empty batch");
  if (batch.outcomes.size() != G || batch.rewards.size() != G)
    throw std::invalid_argument("grpo_update: batch sequences have mismatched lengths");

  UpdateDiagnostics diag;
  if (cfg.algorithm == Algorithm::IPSGRPO) {
    const std::vector<double> scaled = ips_scale_rewards(batch, cfg.clip_eps);
    diag.advantages = group_advantages(scaled);
  } else {
    diag.advantages = group_advantages(batch.rewards);
  }

  std::size_t visits = 0;
  for (const Trajectory& t : batch.trajectories) visits += t.cells.size();
  diag.visited_steps = visits;

  const double c = cfg.ppo_clip_ratio;
  double sum_entropy = 0.0;
  double sum_kl = 0.0;

  for (int epoch = 0; epoch < cfg.inner_epochs; ++epoch) {
    std::vector<double> ratio(G);
    for (std::size_t g = 0; g < G; ++g) {
      const double lp = trajectory_logprob(env, policy, batch.trajectories[g]);
      const double stored = batch.trajectories[g].logprob;
      if (epoch == 0 &&
          std::fabs(lp - stored) > 1e-9 * std::max(1.0, std::fabs(stored)))
        throw std::invalid_argument(
            "grpo_update: batch is off-policy (stored logprob does not match the policy)");
      ratio[g] = std::exp(lp - stored);
    }

    std::vector<double> grad(policy.logits.size(), 0.0);
    for (std::size_t g = 0; g < G; ++g) {
      const Trajectory& t = batch.trajectories[g];
      const double rho = ratio[g];
      const double adv = diag.advantages[g];
      const double unclipped = rho * adv;
      const double clipped = std::clamp(rho, 1.0 - c, 1.0 + c) * adv;
      const bool active = unclipped <= clipped;
      for (std::size_t s = 0; s < t.cells.size(); ++s) {
        const std::size_t cell = t.cells[s];
        const int action = t.actions[s];
        if (env.absorbing[cell]) continue;
        const std::vector<double> pr = action_distribution(env, policy, cell);
        double* cell_grad = grad.data() + cell * policy.actions_per_cell;
        if (active) {
          for (int k = 0; k < policy.actions_per_cell; ++k) {
            if (pr[k] == 0.0 && k != action) continue;
            const double dlp = (k == action ? 1.0 : 0.0) - pr[k];
            cell_grad[k] += (adv * rho / static_cast<double>(G)) * dlp;
          }
        }
        double h = 0.0;
        for (int k = 0; k < policy.actions_per_cell; ++k)
          if (pr[k] > 0.0) h -= pr[k] * std::log(pr[k]);
        if (cfg.entropy_coef > 0.0) {
          for (int k = 0; k < policy.actions_per_cell; ++k) {
            if (pr[k] <= 0.0) continue;
            cell_grad[k] += cfg.entropy_coef / static_cast<double>(visits) *
                            (-pr[k] * (std::log(pr[k]) + h));
          }
        }
        double kl = 0.0;
        int valid = 0;
        for (int k = 0; k < policy.actions_per_cell; ++k)
          if (pr[k] > 0.0) valid++;
        for (int k = 0; k < policy.actions_per_cell; ++k)
          if (pr[k] > 0.0) kl += pr[k] * std::log(pr[k] * static_cast<double>(valid));
        if (cfg.kl_coef > 0.0) {
          for (int k = 0; k < policy.actions_per_cell; ++k) {
            if (pr[k] <= 0.0) continue;
            cell_grad[k] -= cfg.kl_coef / static_cast<double>(visits) *
                            (pr[k] * (std::log(pr[k] * static_cast<double>(valid)) - kl));
          }
        }
        if (epoch == 0) {
          sum_entropy += h;
          sum_kl += kl;
        }
      }
    }
    for (std::size_t i = 0; i < grad.size(); ++i)
      policy.logits[i] += cfg.learning_rate * grad[i];
  }

  diag.mean_entropy = visits ? sum_entropy / static_cast<double>(visits) : 0.0;
  diag.mean_kl = visits ? sum_kl / static_cast<double>(visits) : 0.0;
  return diag;
}

RunLog train(const GridEnv& env, const Simplex& target,
             const std::vector<std::size_t>& tracked_modes, TabularPolicy& policy,
             const TrainConfig& cfg, std::mt19937_64& rng) {
  validate(cfg);
  if (target.size() != env.cell_count())
    throw std::invalid_argument("train: target size does not match the grid");
  for (std::size_t m : tracked_modes)
    if (m >= env.cell_count()) throw std::invalid_argument("train: tracked mode out of range");

  RunLog log;
  log.config = cfg;
  log.tracked_modes = tracked_modes;
  log.records.reserve(cfg.updates);

  const bool exact = env.cell_count() <= 1000000;
  for (int u = 0; u < cfg.updates; ++u) {
    const GroupBatch batch = sample_group(env, policy, cfg.group_size, rng);
    const UpdateDiagnostics diag = grpo_update(env, policy, batch, cfg);

    UpdateRecord rec;
    rec.outcomes = batch.outcomes;
    rec.mode_counts.assign(tracked_modes.size(), 0);
    for (std::size_t o : batch.outcomes)
      for (std::size_t m = 0; m < tracked_modes.size(); ++m)
        if (o == tracked_modes[m]) rec.mode_counts[m]++;

    Simplex dist;
    if (exact) {
      dist = terminal_distribution_exact(env, policy);
    } else {
      dist.assign(env.cell_count(), 0.0);
      for (std::size_t o : batch.outcomes)
        dist[o] += 1.0 / static_cast<double>(batch.outcomes.size());
    }
    rec.l1_exact = l1_distance(dist, target);
    rec.mean_entropy = diag.mean_entropy;
    rec.mean_kl = diag.mean_kl;

    std::set<std::pair<std::size_t, int>> edges;
    for (const Trajectory& t : batch.trajectories)
      for (std::size_t s = 0; s < t.cells.size(); ++s)
        edges.emplace(t.cells[s], t.actions[s]);
    rec.distinct_edges = static_cast<int>(edges.size());

    log.records.push_back(std::move(rec));
    if (u + 1 == cfg.updates) log.final_distribution = dist;
  }
  if (cfg.updates == 0 && exact)
    log.final_distribution = terminal_distribution_exact(env, policy);
  return log;
}

}  // namespace ipslab
