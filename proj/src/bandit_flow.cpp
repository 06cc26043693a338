#include "ipslab/bandit_flow.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "ipslab/rng.hpp"

namespace ipslab {

std::vector<double> expected_return_velocity(const Simplex& p, const RewardVector& r) {
  const AdvantageVector a = advantage(p, r);
  std::vector<double> v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) v[i] = p[i] * a[i];
  return v;
}

std::vector<double> ips_velocity(const Simplex& p, const RewardVector& r) {
  if (p.size() != r.size()) throw std::invalid_argument("ips_velocity: dimension mismatch");
  double total = 0.0;
  for (double rv : r) total += rv;
  std::vector<double> v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) v[i] = r[i] - p[i] * total;
  return v;
}

namespace {

std::vector<double> velocity_of(Objective obj, const Logits& z, const RewardVector& r) {
  const Simplex p = softmax(z);
  return obj == Objective::ExpectedReturn ? expected_return_velocity(p, r)
                                          : ips_velocity(p, r);
}

void axpy(Logits& y, double a, const std::vector<double>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

FlowTrace integrate_flow(const FlowConfig& cfg) {
  if (cfg.rewards.size() != cfg.init_logits.size())
    throw std::invalid_argument("integrate_flow: rewards and init_logits sizes differ");
  if (cfg.step_size <= 0.0 || cfg.step_size > cfg.horizon)
    throw std::invalid_argument("integrate_flow: need 0 < h <= T");

  FlowTrace trace;
  trace.objective = cfg.objective;
  Simplex target;
  if (cfg.objective == Objective::IPS) target = stationary_distribution(cfg.rewards);

  const auto steps = static_cast<std::size_t>(std::llround(cfg.horizon / cfg.step_size));
  Logits z = cfg.init_logits;
  const double h = cfg.step_size;

  auto record = [&](double t) {
    for (double v : z)
      if (!std::isfinite(v))
        throw std::runtime_error("integrate_flow: non-finite state at t=" + std::to_string(t));
    trace.times.push_back(t);
    trace.logits.push_back(z);
    trace.simplexes.push_back(softmax(z));
    trace.velocities.push_back(velocity_of(cfg.objective, z, cfg.rewards));
    if (cfg.objective == Objective::IPS)
      trace.potential.push_back(lyapunov_potential(z, target));
  };

  record(0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    if (cfg.integrator == Integrator::Euler) {
      const auto v = velocity_of(cfg.objective, z, cfg.rewards);
      axpy(z, h, v);
    } else {
      const auto k1 = velocity_of(cfg.objective, z, cfg.rewards);
      Logits z2 = z;
      axpy(z2, 0.5 * h, k1);
      const auto k2 = velocity_of(cfg.objective, z2, cfg.rewards);
      Logits z3 = z;
      axpy(z3, 0.5 * h, k2);
      const auto k3 = velocity_of(cfg.objective, z3, cfg.rewards);
      Logits z4 = z;
      axpy(z4, h, k3);
      const auto k4 = velocity_of(cfg.objective, z4, cfg.rewards);
      for (std::size_t i = 0; i < z.size(); ++i)
        z[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    record(static_cast<double>(k) * h);
  }
  return trace;
}

std::vector<double> log_ratio_residual(const FlowTrace& trace, const RewardVector& r,
                                       std::size_t i, std::size_t j) {
  const std::size_t n = trace.times.size();
  if (n < 5) throw std::invalid_argument("log_ratio_residual: trace too short");

  std::vector<double> logr(n);
  for (std::size_t k = 0; k < n; ++k) logr[k] = log_ratio(trace.simplexes[k], i, j);

  double total = 0.0;
  for (double rv : r) total += rv;

  const double h = trace.times[1] - trace.times[0];
  std::vector<double> res;
  res.reserve(n - 4);
  for (std::size_t k = 2; k + 2 < n; ++k) {
    const double fd =
        (-logr[k + 2] + 8.0 * logr[k + 1] - 8.0 * logr[k - 1] + logr[k - 2]) / (12.0 * h);
    const Simplex& p = trace.simplexes[k];
    double rhs;
    if (trace.objective == Objective::ExpectedReturn) {
      const AdvantageVector a = advantage(p, r);
      rhs = p[i] * a[i] - p[j] * a[j];
    } else {
      rhs = (r[i] - r[j]) - (p[i] - p[j]) * total;
    }
    res.push_back(std::fabs(fd - rhs));
  }
  return res;
}

double lyapunov_potential(const Logits& z, const Simplex& target) {
  if (z.size() != target.size())
    throw std::invalid_argument("lyapunov_potential: dimension mismatch");
  for (double v : z)
    if (!std::isfinite(v)) throw std::invalid_argument("lyapunov_potential: non-finite logit");
  const double mx = *std::max_element(z.begin(), z.end());
  double se = 0.0, dot = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    se += std::exp(z[k] - mx);
    dot += target[k] * z[k];
  }
  return mx + std::log(se) - dot;
}

Simplex stationary_distribution(const RewardVector& r) {
  double total = 0.0;
  for (double v : r) {
    if (v < 0.0)
      throw std::domain_error(
          "stationary_distribution: negative reward violates the nonnegativity assumption");
    total += v;
  }
  if (total <= 0.0)
    throw std::domain_error(
        "stationary_distribution: reward sum must be positive for a stationary point");
  Simplex p(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) p[i] = r[i] / total;
  return p;
}

StochasticTrace simulate_stochastic(const StochasticRunConfig& cfg) {
  if (cfg.rewards.size() != cfg.init_logits.size())
    throw std::invalid_argument("simulate_stochastic: rewards and init_logits sizes differ");
  if (cfg.group_size < 1) throw std::invalid_argument("simulate_stochastic: need G >= 1");
  if (cfg.objective == Objective::IPS && (cfg.clip_eps <= 0.0 || cfg.clip_eps >= 1.0))
    throw std::invalid_argument("simulate_stochastic: clip eps must lie in (0,1)");

  const std::size_t K = cfg.rewards.size();
  const int G = cfg.group_size;
  Logits z = cfg.init_logits;
  std::mt19937_64 rng(cfg.seed);

  StochasticTrace trace;
  trace.simplexes.reserve(cfg.updates);
  trace.sample_counts.reserve(cfg.updates);

  for (int u = 0; u < cfg.updates; ++u) {
    const Simplex p = softmax(z);
    std::vector<int> counts(K, 0);
    std::vector<std::size_t> outcomes(G);
    for (int g = 0; g < G; ++g) {
      outcomes[g] = sample_index(p, rng);
      counts[outcomes[g]]++;
    }

    std::vector<double> reward(G);
    for (int g = 0; g < G; ++g) {
      reward[g] = cfg.rewards[outcomes[g]];
      if (cfg.objective == Objective::IPS) {
        const double phat = static_cast<double>(counts[outcomes[g]]) / G;
        reward[g] /= std::max(phat, cfg.clip_eps);
      }
    }
    if (cfg.use_group_baseline) {
      double mean = 0.0;
      for (double v : reward) mean += v;
      mean /= G;
      for (double& v : reward) v -= mean;
    }

    std::vector<double> grad(K, 0.0);
    for (int g = 0; g < G; ++g) {
      for (std::size_t k = 0; k < K; ++k) {
        const double dlp = (k == outcomes[g] ? 1.0 : 0.0) - p[k];
        grad[k] += reward[g] * dlp / G;
      }
    }
    for (std::size_t k = 0; k < K; ++k) z[k] += cfg.learning_rate * grad[k];

    trace.simplexes.push_back(softmax(z));
    trace.sample_counts.push_back(std::move(counts));
  }
  trace.final_simplex = trace.simplexes.empty() ? softmax(z) : trace.simplexes.back();
  return trace;
}

CollapseReport detect_collapse(const std::vector<Simplex>& trace, double threshold) {
  if (trace.empty()) throw std::invalid_argument("detect_collapse: empty trace");
  CollapseReport rep;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const auto it = std::max_element(trace[t].begin(), trace[t].end());
    if (!rep.collapsed && *it >= threshold) {
      rep.collapsed = true;
      rep.step = t;
      rep.winner = static_cast<std::size_t>(it - trace[t].begin());
    }
  }
  const auto& last = trace.back();
  rep.terminal_max_prob = *std::max_element(last.begin(), last.end());
  return rep;
}

}  // namespace ipslab
