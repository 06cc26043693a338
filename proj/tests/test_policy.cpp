#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "ipslab/grid_env.hpp"
#include "ipslab/rng.hpp"
#include "ipslab/tabular_policy.hpp"

using namespace ipslab;

namespace {

TabularPolicy random_policy(const GridEnv& env, std::uint64_t seed, double scale) {
  TabularPolicy pol = make_policy(env);
  std::mt19937_64 rng(seed);
  for (double& v : pol.logits) v = scale * (2.0 * u01(rng) - 1.0);
  return pol;
}

std::vector<std::size_t> topo_order(const GridEnv& env) {
  std::vector<std::size_t> order(env.cell_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Coords ca = env.coords(a), cb = env.coords(b);
    return std::accumulate(ca.begin(), ca.end(), 0) < std::accumulate(cb.begin(), cb.end(), 0);
  });
  return order;
}

double expected_actions(const GridEnv& env, const TabularPolicy& pol) {
  std::vector<double> reach(env.cell_count(), 0.0);
  reach[0] = 1.0;
  double total = 0.0;
  for (std::size_t cell : topo_order(env)) {
    if (reach[cell] == 0.0) continue;
    total += reach[cell];
    const auto dist = action_distribution(env, pol, cell);
    for (int a = 0; a < env.n; ++a)
      if (dist[a] > 0.0) reach[env.next_cell(cell, a)] += reach[cell] * dist[a];
  }
  return total;
}

}  // namespace

TEST_CASE("hypergrid env mirrors the reward field with no absorbing cells") {
  const GridSpec spec;
  const GridEnv env = make_hypergrid_env(spec);
  CHECK(env.n == 2);
  CHECK(env.H == 8);
  REQUIRE(env.cell_count() == 64);
  for (std::size_t c = 0; c < env.cell_count(); ++c) {
    CHECK(env.reward[c] == terminal_reward(spec, env.coords(c)));
    CHECK_FALSE(env.absorbing[c]);
  }
  CHECK(env.valid_action_ids(env.index({0, 0})) == std::vector<int>{0, 1, 2});
  CHECK(env.valid_action_ids(env.index({7, 7})) == std::vector<int>{2});
  CHECK(env.valid_action_ids(env.index({7, 0})) == std::vector<int>{1, 2});
  CHECK(env.next_cell(env.index({3, 2}), 0) == env.index({4, 2}));
  CHECK(env.next_cell(env.index({3, 2}), 1) == env.index({3, 3}));
}

TEST_CASE("equal-reward env has two absorbing goals over a floor") {
  const GridEnv env = make_equal_reward_env();
  CHECK(env.n == 2);
  CHECK(env.H == 7);
  const std::size_t a = env.index({4, 3});
  const std::size_t b = env.index({6, 1});
  CHECK(a == 31);
  CHECK(b == 43);
  CHECK(env.reward[a] == 1.0);
  CHECK(env.reward[b] == 1.0);
  CHECK(env.absorbing[a]);
  CHECK(env.absorbing[b]);
  for (std::size_t c = 0; c < env.cell_count(); ++c) {
    if (c == a || c == b) continue;
    CHECK(env.reward[c] == 0.001);
    CHECK_FALSE(env.absorbing[c]);
  }
  CHECK(env.valid_action_ids(a) == std::vector<int>{2});
}

TEST_CASE("fresh policies start at the requested terminate bias") {
  const GridEnv env = make_hypergrid_env(GridSpec{});
  const TabularPolicy pol = make_policy(env, -1.5);
  for (std::size_t c = 0; c < env.cell_count(); ++c) {
    CHECK(pol.logit(c, 0) == 0.0);
    CHECK(pol.logit(c, 1) == 0.0);
    CHECK(pol.logit(c, 2) == -1.5);
  }
}

TEST_CASE("action distribution is a masked softmax with exact zeros") {
  const GridEnv env = make_hypergrid_env(GridSpec{});
  const TabularPolicy pol = make_policy(env);

  const auto interior = action_distribution(env, pol, env.index({3, 3}));
  for (double p : interior) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const auto corner = action_distribution(env, pol, env.index({7, 7}));
  CHECK(corner[0] == 0.0);
  CHECK(corner[1] == 0.0);
  CHECK(corner[2] == 1.0);

  const auto edge = action_distribution(env, pol, env.index({7, 0}));
  CHECK(edge[0] == 0.0);
  CHECK(edge[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(edge[2] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("a strong terminate bias ends every episode at the origin") {
  const GridEnv env = make_hypergrid_env(GridSpec{});
  const TabularPolicy pol = make_policy(env, 800.0);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const Trajectory traj = sample_trajectory(env, pol, rng);
    REQUIRE(traj.cells.size() == 1);
    CHECK(traj.cells[0] == 0);
    CHECK(traj.actions[0] == env.terminate_action());
    CHECK(traj.terminal_cell == 0);
    CHECK(traj.reward == env.reward[0]);
    CHECK(traj.logprob == 0.0);
  }
}

TEST_CASE("sampled trajectories satisfy the episode invariants") {
  const GridEnv env = make_hypergrid_env(GridSpec{});
  const TabularPolicy pol = random_policy(env, 99, 1.0);
  std::mt19937_64 rng(6);
  const std::size_t max_len = static_cast<std::size_t>(env.n * (env.H - 1) + 1);
  for (int i = 0; i < 200; ++i) {
    const Trajectory traj = sample_trajectory(env, pol, rng);
    REQUIRE(!traj.cells.empty());
    CHECK(traj.cells.size() == traj.actions.size());
    CHECK(traj.cells.size() <= max_len);
    CHECK(traj.actions.back() == env.terminate_action());
    CHECK(traj.terminal_cell == traj.cells.back());
    CHECK(traj.reward == env.reward[traj.terminal_cell]);
    for (std::size_t t = 0; t + 1 < traj.cells.size(); ++t) {
      CHECK(traj.actions[t] != env.terminate_action());
      CHECK(env.next_cell(traj.cells[t], traj.actions[t]) == traj.cells[t + 1]);
    }

    double product = 1.0;
    for (std::size_t t = 0; t < traj.cells.size(); ++t)
      product *= action_distribution(env, pol, traj.cells[t])[traj.actions[t]];
    CHECK(std::exp(traj.logprob) == doctest::Approx(product).epsilon(1e-9));
  }
}

TEST_CASE("trajectory logprob recomputes exactly and tracks the policy") {
  const GridEnv env = make_hypergrid_env(GridSpec{});
  TabularPolicy pol = random_policy(env, 123, 0.7);
  std::mt19937_64 rng(7);
  const Trajectory traj = sample_trajectory(env, pol, rng);
  CHECK(trajectory_logprob(env, pol, traj) == doctest::Approx(traj.logprob).epsilon(1e-9));

  pol.logit(traj.cells[0], traj.actions[0]) += 0.25;
  CHECK(trajectory_logprob(env, pol, traj) != traj.logprob);
}

TEST_CASE("single-step logprob at a uniform interior cell is log one third") {
  const GridEnv env = make_hypergrid_env(GridSpec{});
  const TabularPolicy pol = make_policy(env);
  Trajectory traj;
  traj.cells = {0};
  traj.actions = {env.terminate_action()};
  traj.terminal_cell = 0;
  CHECK(trajectory_logprob(env, pol, traj) ==
        doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("policy entropy closed forms") {
  const GridEnv env = make_hypergrid_env(GridSpec{});
  const TabularPolicy uniform = make_policy(env);
  CHECK(policy_entropy(env, uniform, env.index({2, 5})) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(policy_entropy(env, uniform, env.index({7, 0})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(policy_entropy(env, uniform, env.index({7, 7})) == 0.0);

  const TabularPolicy peaked = make_policy(env, 800.0);
  CHECK(policy_entropy(env, peaked, env.index({2, 5})) == 0.0);

  const TabularPolicy rand_pol = random_policy(env, 17, 2.0);
  for (std::size_t c = 0; c < env.cell_count(); ++c) {
    const double h = policy_entropy(env, rand_pol, c);
    CHECK(h >= 0.0);
    CHECK(h <= std::log(3.0) + 1e-12);
  }
}

TEST_CASE("kl to uniform is zero for fresh policies and positive when skewed") {
  const GridEnv env = make_hypergrid_env(GridSpec{});
  const TabularPolicy uniform = make_policy(env);
  for (std::size_t c = 0; c < env.cell_count(); ++c)
    CHECK(std::abs(kl_to_uniform(env, uniform, c)) <= 1e-12);

  TabularPolicy skewed = make_policy(env);
  const std::size_t edge = env.index({7, 0});
  skewed.logit(edge, 1) = std::log(3.0);
  const double expected = 0.75 * std::log(1.5) + 0.25 * std::log(0.5);
  CHECK(kl_to_uniform(env, skewed, edge) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("kl to reference hand value and sanity properties") {
  const GridEnv env = make_hypergrid_env(GridSpec{});
  const std::size_t edge = env.index({7, 0});

  const TabularPolicy pol = make_policy(env);
  TabularPolicy ref = make_policy(env);
  ref.logit(edge, 1) = std::log(3.0);

  const double expected = 0.5 * std::log(0.5 / 0.75) + 0.5 * std::log(0.5 / 0.25);
  CHECK(kl_to_reference(env, pol, ref, edge) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(kl_to_reference(env, pol, pol, edge) == doctest::Approx(0.0).epsilon(1e-15));

  const TabularPolicy a = random_policy(env, 31, 1.5);
  const TabularPolicy b = random_policy(env, 32, 1.5);
  for (std::size_t c = 0; c < env.cell_count(); ++c) {
    CHECK(kl_to_reference(env, a, b, c) >= -1e-12);
    CHECK(std::abs(kl_to_reference(env, a, a, c)) <= 1e-12);
  }

  TabularPolicy excluding = make_policy(env);
  excluding.logit(edge, 1) = -800.0;
  CHECK_THROWS_AS(kl_to_reference(env, pol, excluding, edge), std::domain_error);
}

TEST_CASE("exact terminal distribution of an always-terminate policy is a point mass") {
  const GridEnv env = make_hypergrid_env(GridSpec{});
  const Simplex dp = terminal_distribution_exact(env, make_policy(env, 800.0));
  CHECK(dp[0] == 1.0);
  for (std::size_t c = 1; c < dp.size(); ++c) CHECK(dp[c] == 0.0);
}

TEST_CASE("exact terminal distribution on a two-cell line is uniform") {
  GridSpec spec;
  spec.n = 1;
  spec.H = 2;
  const GridEnv env = make_hypergrid_env(spec);
  const Simplex dp = terminal_distribution_exact(env, make_policy(env));
  REQUIRE(dp.size() == 2);
  CHECK(dp[0] == 0.5);
  CHECK(dp[1] == 0.5);
}

TEST_CASE("exact terminal distribution conserves mass and covers the grid") {
  const GridEnv env = make_hypergrid_env(GridSpec{});
  const Simplex dp = terminal_distribution_exact(env, make_policy(env));
  CHECK(is_simplex(dp));
  for (double p : dp) CHECK(p > 0.0);

  const Simplex dp_rand = terminal_distribution_exact(env, random_policy(env, 55, 1.0));
  CHECK(is_simplex(dp_rand));

  CHECK_THROWS_AS(terminal_distribution_exact(env, make_policy(env), 10), std::runtime_error);
}

TEST_CASE("sampling agrees with the exact terminal distribution") {
  const GridEnv env = make_hypergrid_env(GridSpec{});
  const TabularPolicy pol = random_policy(env, 77, 1.0);
  const Simplex dp = terminal_distribution_exact(env, pol);

  std::mt19937_64 rng(8);
  const int samples = 100000;
  std::vector<double> emp(env.cell_count(), 0.0);
  for (int i = 0; i < samples; ++i)
    emp[sample_trajectory(env, pol, rng).terminal_cell] += 1.0 / samples;
  CHECK(l1_distance(emp, dp) <= 0.02);
}

TEST_CASE("mean sampled episode length matches the exact expectation") {
  const GridEnv env = make_hypergrid_env(GridSpec{});
  const TabularPolicy pol = make_policy(env);
  const double exact = expected_actions(env, pol);

  std::mt19937_64 rng(9);
  const int samples = 10000;
  double mean = 0.0, sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double len = static_cast<double>(sample_trajectory(env, pol, rng).actions.size());
    mean += len;
    sq += len * len;
  }
  mean /= samples;
  const double var = sq / samples - mean * mean;
  const double se = std::sqrt(var / samples);
  CHECK(std::abs(mean - exact) <= 3.0 * se + 1e-9);
}
