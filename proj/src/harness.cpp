#include "ipslab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ipslab/bandit_flow.hpp"
#include "ipslab/grid_env.hpp"
#include "ipslab/hypergrid.hpp"
#include "ipslab/io_util.hpp"
#include "ipslab/metrics.hpp"
#include "ipslab/rng.hpp"
#include "ipslab/run_log.hpp"
#include "ipslab/svg_render.hpp"
#include "ipslab/tabular_policy.hpp"
#include "ipslab/trainer.hpp"

namespace ipslab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kNoiseStreamSalt = 0x9e3779b97f4a7c15ULL;
constexpr double kIdentityTol = 1e-6;
constexpr double kIdentityMinProb = 1e-6;
constexpr double kPsiIncreaseTol = 1e-10;
constexpr double kGatingStep = 1e-3;
constexpr double kFlowCollapseThreshold = 0.99;
constexpr double kStochCollapseThreshold = 0.95;
constexpr double kStochStationaryBand = 0.2;
constexpr double kRequiredSeedFraction = 0.8;
constexpr double kWinnerTakeAllThreshold = 0.95;
constexpr double kBalancedLow = 0.35;
constexpr double kBalancedHigh = 0.65;
constexpr double kMedianRatioFloor = 3.0;

std::string fmt3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string stamp_seed(std::uint64_t hash, std::uint64_t seed) {
  return "config_hash=" + hash_hex(hash) + " seed=" + std::to_string(seed);
}

std::string stamp_unseeded(std::uint64_t hash) {
  return "config_hash=" + hash_hex(hash) + " seed=none";
}

std::string seeds_text(const std::vector<std::uint64_t>& seeds) {
  std::string s;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(seeds[i]);
  }
  return s;
}

std::string stamp_seeds(std::uint64_t hash, const std::vector<std::uint64_t>& seeds) {
  return "config_hash=" + hash_hex(hash) + " seeds=" + seeds_text(seeds);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

class CheckSet {
 public:
  explicit CheckSet(std::string label) : label_(std::move(label)) {}

  void record(const std::string& name, bool ok, const std::string& detail) {
    results_.emplace_back(name, ok);
    std::cout << (ok ? "[check PASS] " : "[check FAIL] ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
  }

  json to_json() const {
    json j = json::object();
    for (const auto& [name, ok] : results_) j[name] = ok;
    return j;
  }

  bool summarize() const {
    int passed = 0;
    for (const auto& [name, ok] : results_) passed += ok;
    std::cout << "[" << label_ << "] " << passed << "/" << results_.size()
              << " checks passed\n";
    return passed == static_cast<int>(results_.size());
  }

 private:
  std::string label_;
  std::vector<std::pair<std::string, bool>> results_;
};

// Runs fn(0..count-1) on a small worker pool. Work items must be mutually
// independent; the first exception is rethrown after all workers join.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const int workers =
      std::max(1, std::min<int>(jobs, static_cast<int>(std::min<std::size_t>(count, 1024))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

const char* objective_label(Objective o) {
  return o == Objective::ExpectedReturn ? "expected_return" : "ips";
}

const char* integrator_label(Integrator i) { return i == Integrator::RK4 ? "RK4" : "Euler"; }

const char* algorithm_file_tag(Algorithm a) { return a == Algorithm::GRPO ? "grpo" : "ips_grpo"; }

json collapse_json(const CollapseReport& rep) {
  return json{{"collapsed", rep.collapsed},
              {"step", rep.step},
              {"winner", rep.winner},
              {"terminal_max_prob", rep.terminal_max_prob}};
}

void write_flow_trace_csv(const std::string& path, const FlowTrace& trace,
                          const std::string& stamp) {
  const std::size_t K = trace.simplexes.empty() ? 0 : trace.simplexes.front().size();
  std::vector<std::string> header = {"time"};
  for (std::size_t k = 0; k < K; ++k) header.push_back("z_" + std::to_string(k));
  for (std::size_t k = 0; k < K; ++k) header.push_back("p_" + std::to_string(k));
  for (std::size_t k = 0; k < K; ++k) header.push_back("v_" + std::to_string(k));
  const bool has_psi = !trace.potential.empty();
  if (has_psi) header.push_back("psi");

  std::vector<std::vector<std::string>> rows;
  rows.reserve(trace.times.size());
  for (std::size_t t = 0; t < trace.times.size(); ++t) {
    std::vector<std::string> row;
    row.push_back(format_double(trace.times[t]));
    for (double z : trace.logits[t]) row.push_back(format_double(z));
    for (double p : trace.simplexes[t]) row.push_back(format_double(p));
    for (double v : trace.velocities[t]) row.push_back(format_double(v));
    if (has_psi) row.push_back(format_double(trace.potential[t]));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows, stamp);
}

struct IdentityReport {
  double max_residual = 0.0;
  std::size_t pairs_checked = 0;
  std::size_t pairs_skipped = 0;
  std::vector<std::vector<std::string>> rows;
};

IdentityReport check_log_ratio_identity(const FlowTrace& trace, const RewardVector& r) {
  const std::size_t K = r.size();
  std::vector<double> min_prob(K, std::numeric_limits<double>::infinity());
  for (const Simplex& p : trace.simplexes)
    for (std::size_t k = 0; k < K; ++k) min_prob[k] = std::min(min_prob[k], p[k]);

  IdentityReport rep;
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = i + 1; j < K; ++j) {
      const double pair_min = std::min(min_prob[i], min_prob[j]);
      if (pair_min < kIdentityMinProb) {
        ++rep.pairs_skipped;
        rep.rows.push_back({std::to_string(i), std::to_string(j), format_double(pair_min),
                            "nan", "0"});
        continue;
      }
      const std::vector<double> res = log_ratio_residual(trace, r, i, j);
      double mx = 0.0;
      for (double x : res) mx = std::max(mx, x);
      rep.max_residual = std::max(rep.max_residual, mx);
      ++rep.pairs_checked;
      rep.rows.push_back({std::to_string(i), std::to_string(j), format_double(pair_min),
                          format_double(mx), "1"});
    }
  }
  return rep;
}

double max_step_increase(const std::vector<double>& series) {
  if (series.size() < 2) return 0.0;
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t < series.size(); ++t)
    mx = std::max(mx, series[t] - series[t - 1]);
  return mx;
}

// Aggregate statistics of one trained policy against the reference target.
struct GridRunResult {
  Algorithm algorithm = Algorithm::GRPO;
  std::uint64_t seed = 0;
  RunLog log;
  TabularPolicy final_policy;
  double final_l1 = std::numeric_limits<double>::quiet_NaN();
  double sampled_l1 = std::numeric_limits<double>::quiet_NaN();
  int modes_rec = 0;
  int modes_final = 0;
};

double final_sampled_l1(const RunLog& log, const Simplex& target) {
  if (log.records.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto& outs = log.records.back().outcomes;
  Simplex emp(target.size(), 0.0);
  for (std::size_t o : outs) emp[o] += 1.0;
  for (double& e : emp) e /= static_cast<double>(outs.size());
  return l1_distance(emp, target);
}

GridRunResult run_grid_training(const GridEnv& env, const Simplex& target,
                                const std::vector<std::size_t>& tracked,
                                const TrainConfig& base, Algorithm alg, std::uint64_t seed) {
  TrainConfig tc = base;
  tc.algorithm = alg;
  tc.seed = seed;
  TabularPolicy policy = make_policy(env, tc.init_terminate_logit);
  std::mt19937_64 rng(seed);

  GridRunResult res;
  res.algorithm = alg;
  res.seed = seed;
  res.log = train(env, target, tracked, policy, tc, rng);
  res.final_policy = std::move(policy);
  res.final_l1 = l1_distance(res.log.final_distribution, target);
  res.sampled_l1 = final_sampled_l1(res.log, target);
  res.modes_rec = modes_recovered(res.log);
  if (!res.log.records.empty())
    for (int c : res.log.records.back().mode_counts) res.modes_final += (c > 0);
  return res;
}

double final_quarter_mode_freq(const RunLog& log, std::size_t mode_idx) {
  const auto& recs = log.records;
  if (recs.empty()) return 0.0;
  const std::size_t q = std::max<std::size_t>(1, recs.size() / 4);
  long hits = 0;
  long total = 0;
  for (std::size_t u = recs.size() - q; u < recs.size(); ++u) {
    total += static_cast<long>(recs[u].outcomes.size());
    hits += recs[u].mode_counts[mode_idx];
  }
  return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
}

std::vector<std::size_t> final_quarter_outcomes(const RunLog& log) {
  std::vector<std::size_t> out;
  const auto& recs = log.records;
  if (recs.empty()) return out;
  const std::size_t q = std::max<std::size_t>(1, recs.size() / 4);
  for (std::size_t u = recs.size() - q; u < recs.size(); ++u)
    out.insert(out.end(), recs[u].outcomes.begin(), recs[u].outcomes.end());
  return out;
}

void echo_config(const ExperimentConfig& cfg) {
  std::cout << "config: " << canonical_config_json(cfg) << "\n";
}

}  // namespace

bool run_bandit_flow(const ExperimentConfig& cfg, const HarnessOptions& opts) {
  const std::uint64_t hash = config_hash(cfg);
  const RewardVector& r = cfg.flow.rewards;
  const Simplex target = stationary_distribution(r);

  std::cout << "[bandit-flow] config_hash=" << hash_hex(hash) << " K=" << r.size()
            << " step=" << fmt3(cfg.flow.step_size) << " horizon=" << fmt3(cfg.flow.horizon)
            << " integrator=" << integrator_label(cfg.flow.integrator) << "\n";
  std::cout << "[bandit-flow] reward-proportional stationary point:";
  for (double p : target) std::cout << ' ' << fmt3(p);
  std::cout << "\n";
  if (opts.dry_run) {
    echo_config(cfg);
    std::cout << "[bandit-flow] dry run: no integration performed\n";
    return true;
  }

  fs::create_directories(cfg.output_dir);
  const std::string stamp = stamp_unseeded(hash);
  CheckSet checks("bandit-flow");

  json summary;
  summary["experiment"] = "bandit-flow";
  summary["config_hash"] = hash_hex(hash);
  summary["seed"] = "none";
  summary["rewards"] = r;
  summary["stationary"] = target;

  for (Objective obj : {Objective::ExpectedReturn, Objective::IPS}) {
    FlowConfig main_cfg = cfg.flow;
    main_cfg.objective = obj;
    const FlowTrace main_trace = integrate_flow(main_cfg);

    FlowConfig gate_cfg = main_cfg;
    gate_cfg.integrator = Integrator::RK4;
    gate_cfg.step_size = kGatingStep;
    const FlowTrace gate_trace = integrate_flow(gate_cfg);

    const std::string label = objective_label(obj);
    write_flow_trace_csv(join_path(cfg.output_dir, "flow_trace_" + label + ".csv"),
                         main_trace, stamp);

    const IdentityReport rep = check_log_ratio_identity(gate_trace, r);
    write_csv(join_path(cfg.output_dir, "flow_residuals_" + label + ".csv"),
              {"pair_i", "pair_j", "min_prob", "max_residual", "checked"}, rep.rows, stamp);

    const Simplex& final_p = main_trace.simplexes.back();
    const double final_max = *std::max_element(final_p.begin(), final_p.end());
    const double l1_stationary = l1_distance(final_p, target);
    const CollapseReport collapse =
        detect_collapse(main_trace.simplexes, kFlowCollapseThreshold);

    std::cout << "[bandit-flow] " << label << ": final max p=" << fmt3(final_max)
              << " l1_to_stationary=" << fmt3(l1_stationary)
              << " collapsed=" << (collapse.collapsed ? "yes" : "no");
    if (collapse.collapsed)
      std::cout << " winner=" << collapse.winner << " step=" << collapse.step;
    std::cout << "\n";

    json leg;
    leg["final_p"] = final_p;
    leg["final_max_prob"] = final_max;
    leg["l1_to_stationary"] = l1_stationary;
    leg["identity_max_residual"] = rep.max_residual;
    leg["identity_pairs_checked"] = rep.pairs_checked;
    leg["identity_pairs_skipped"] = rep.pairs_skipped;
    leg["collapse"] = collapse_json(collapse);

    if (obj == Objective::IPS) {
      std::vector<std::vector<std::string>> psi_rows;
      psi_rows.reserve(main_trace.potential.size());
      for (std::size_t t = 0; t < main_trace.potential.size(); ++t) {
        const double delta = t ? main_trace.potential[t] - main_trace.potential[t - 1] : 0.0;
        psi_rows.push_back({std::to_string(t), format_double(main_trace.times[t]),
                            format_double(main_trace.potential[t]), format_double(delta)});
      }
      write_csv(join_path(cfg.output_dir, "flow_psi_ips.csv"),
                {"step", "time", "psi", "delta"}, psi_rows, stamp);

      leg["max_psi_increase_main"] = max_step_increase(main_trace.potential);
      const double gate_psi = max_step_increase(gate_trace.potential);
      leg["max_psi_increase_gating"] = gate_psi;
      checks.record("ips_psi_nonincreasing", gate_psi <= kPsiIncreaseTol,
                    "max step increase " + fmt3(gate_psi) + ", tol " + fmt3(kPsiIncreaseTol));
    }
    checks.record(label + "_log_ratio_identity", rep.max_residual <= kIdentityTol,
                  "max residual " + fmt3(rep.max_residual) + " over " +
                      std::to_string(rep.pairs_checked) + " pairs, tol " + fmt3(kIdentityTol));
    summary[label] = leg;
  }

  summary["checks"] = checks.to_json();
  write_text_file(join_path(cfg.output_dir, "flow_summary.json"), summary.dump(2) + "\n");
  return checks.summarize();
}

bool run_bandit_stochastic(const ExperimentConfig& cfg, const HarnessOptions& opts) {
  const std::uint64_t hash = config_hash(cfg);
  const RewardVector& r = cfg.stochastic.rewards;
  const Simplex target = stationary_distribution(r);
  const std::size_t S = cfg.seeds.size();

  std::cout << "[bandit-stochastic] config_hash=" << hash_hex(hash) << " K=" << r.size()
            << " G=" << cfg.stochastic.group_size << " lr=" << fmt3(cfg.stochastic.learning_rate)
            << " updates=" << cfg.stochastic.updates << " clip_eps=" << fmt3(cfg.stochastic.clip_eps)
            << " init_noise=" << fmt3(cfg.stochastic_init_noise) << " seeds=" << S << "\n";
  if (opts.dry_run) {
    echo_config(cfg);
    std::cout << "[bandit-stochastic] dry run: " << 2 * S << " runs planned, none executed\n";
    return true;
  }

  fs::create_directories(cfg.output_dir);

  struct StochRow {
    std::uint64_t seed = 0;
    Objective objective = Objective::ExpectedReturn;
    Simplex final_p;
    double max_p = 0.0;
    double l1_to_stationary = 0.0;
  };
  std::vector<StochRow> rows(2 * S);

  parallel_for(2 * S, opts.jobs, [&](std::size_t idx) {
    const std::uint64_t seed = cfg.seeds[idx / 2];
    const Objective obj = (idx % 2 == 0) ? Objective::ExpectedReturn : Objective::IPS;

    StochasticRunConfig rc = cfg.stochastic;
    rc.seed = seed;
    rc.objective = obj;
    std::mt19937_64 noise_rng(seed ^ kNoiseStreamSalt);
    for (double& z : rc.init_logits)
      z += cfg.stochastic_init_noise * (2.0 * u01(noise_rng) - 1.0);

    const StochasticTrace trace = simulate_stochastic(rc);

    StochRow& row = rows[idx];
    row.seed = seed;
    row.objective = obj;
    row.final_p = trace.final_simplex;
    row.max_p = *std::max_element(row.final_p.begin(), row.final_p.end());
    row.l1_to_stationary = l1_distance(row.final_p, target);

    if (seed == cfg.seeds.front()) {
      std::vector<std::string> header = {"update"};
      for (std::size_t k = 0; k < r.size(); ++k) header.push_back("p_" + std::to_string(k));
      header.push_back("max_p");
      std::vector<std::vector<std::string>> trace_rows;
      trace_rows.reserve(trace.simplexes.size());
      for (std::size_t u = 0; u < trace.simplexes.size(); ++u) {
        std::vector<std::string> tr = {std::to_string(u)};
        for (double p : trace.simplexes[u]) tr.push_back(format_double(p));
        tr.push_back(format_double(
            *std::max_element(trace.simplexes[u].begin(), trace.simplexes[u].end())));
        trace_rows.push_back(std::move(tr));
      }
      const std::string name = std::string("stoch_trace_") + objective_label(obj) + "_seed" +
                               std::to_string(seed) + ".csv";
      write_csv(join_path(cfg.output_dir, name), header, trace_rows, stamp_seed(hash, seed));
    }
  });

  int er_collapsed = 0;
  int ips_near = 0;
  std::vector<std::string> header = {"seed", "objective", "max_p", "l1_to_stationary",
                                     "collapsed", "near_stationary"};
  for (std::size_t k = 0; k < r.size(); ++k) header.push_back("p_" + std::to_string(k));
  std::vector<std::vector<std::string>> csv_rows;
  json run_rows = json::array();
  for (const auto& row : rows) {
    const bool collapsed = row.max_p >= kStochCollapseThreshold;
    const bool near = row.l1_to_stationary <= kStochStationaryBand;
    if (row.objective == Objective::ExpectedReturn)
      er_collapsed += collapsed;
    else
      ips_near += near;
    std::vector<std::string> cr = {std::to_string(row.seed), objective_label(row.objective),
                                   format_double(row.max_p),
                                   format_double(row.l1_to_stationary),
                                   collapsed ? "1" : "0", near ? "1" : "0"};
    for (double p : row.final_p) cr.push_back(format_double(p));
    csv_rows.push_back(std::move(cr));
    run_rows.push_back(json{{"seed", row.seed},
                            {"objective", objective_label(row.objective)},
                            {"max_p", row.max_p},
                            {"l1_to_stationary", row.l1_to_stationary},
                            {"collapsed", collapsed},
                            {"near_stationary", near}});
  }
  write_csv(join_path(cfg.output_dir, "stoch_runs.csv"), header, csv_rows,
            stamp_seeds(hash, cfg.seeds));

  const double er_frac = static_cast<double>(er_collapsed) / static_cast<double>(S);
  const double ips_frac = static_cast<double>(ips_near) / static_cast<double>(S);
  std::cout << "[bandit-stochastic] expected-return runs with max p >= "
            << fmt3(kStochCollapseThreshold) << ": " << er_collapsed << "/" << S << "\n";
  std::cout << "[bandit-stochastic] ips runs within l1 " << fmt3(kStochStationaryBand)
            << " of stationary: " << ips_near << "/" << S << "\n";

  CheckSet checks("bandit-stochastic");
  checks.record("expected_return_collapse_fraction", er_frac >= kRequiredSeedFraction,
                fmt3(er_frac) + " >= " + fmt3(kRequiredSeedFraction) + " required");
  checks.record("ips_near_stationary_fraction", ips_frac >= kRequiredSeedFraction,
                fmt3(ips_frac) + " >= " + fmt3(kRequiredSeedFraction) + " required");

  json summary;
  summary["experiment"] = "bandit-stochastic";
  summary["config_hash"] = hash_hex(hash);
  summary["seeds"] = cfg.seeds;
  summary["rewards"] = r;
  summary["stationary"] = target;
  summary["collapse_threshold"] = kStochCollapseThreshold;
  summary["stationary_band"] = kStochStationaryBand;
  summary["required_fraction"] = kRequiredSeedFraction;
  summary["expected_return_collapse_fraction"] = er_frac;
  summary["ips_near_stationary_fraction"] = ips_frac;
  summary["runs"] = run_rows;
  summary["checks"] = checks.to_json();
  write_text_file(join_path(cfg.output_dir, "stoch_summary.json"), summary.dump(2) + "\n");
  return checks.summarize();
}

bool run_hypergrid(const ExperimentConfig& cfg, const HarnessOptions& opts) {
  const std::uint64_t hash = config_hash(cfg);
  const GridEnv env = make_hypergrid_env(cfg.grid);
  const Simplex target = enumerate_target(cfg.grid);
  const ModeSet modes = make_mode_set(env);
  const std::size_t S = cfg.seeds.size();

  const double target_max = *std::max_element(target.begin(), target.end());
  double mode_mass = 0.0;
  for (std::size_t c : modes.cells) mode_mass += target[c];

  std::cout << "[hypergrid] config_hash=" << hash_hex(hash) << " n=" << cfg.grid.n
            << " H=" << cfg.grid.H << " cells=" << env.cell_count()
            << " modes=" << modes.cells.size() << "\n";
  std::cout << "[hypergrid] target max p=" << fmt3(target_max)
            << " mode mass=" << fmt3(mode_mass)
            << " collapsed l1 reference=" << fmt3(2.0 * (1.0 - target_max)) << "\n";
  if (opts.dry_run) {
    echo_config(cfg);
    std::cout << "[hypergrid] dry run: " << 2 * S << " training runs planned, none executed\n";
    return true;
  }

  fs::create_directories(cfg.output_dir);
  const Algorithm algs[2] = {Algorithm::GRPO, Algorithm::IPSGRPO};
  std::vector<GridRunResult> results(2 * S);

  parallel_for(2 * S, opts.jobs, [&](std::size_t idx) {
    const Algorithm alg = algs[idx / S];
    const std::uint64_t seed = cfg.seeds[idx % S];
    GridRunResult res = run_grid_training(env, target, modes.cells, cfg.train, alg, seed);

    const std::string base = std::string("hypergrid_run_") + algorithm_file_tag(alg) +
                             "_seed" + std::to_string(seed);
    write_run_log_csv(res.log, join_path(cfg.output_dir, base + ".csv"),
                      stamp_seed(hash, seed));
    write_run_summary_json(res.log, hash, join_path(cfg.output_dir, base + ".json"));
    results[idx] = std::move(res);
  });

  if (cfg.grid.n == 2) {
    write_heatmap_svg(join_path(cfg.output_dir, "hypergrid_target.svg"), target, cfg.grid.H,
                      "reward-proportional target density", stamp_unseeded(hash));
    for (int a = 0; a < 2; ++a) {
      const GridRunResult& first = results[static_cast<std::size_t>(a) * S];
      const std::string name =
          std::string("hypergrid_density_") + algorithm_file_tag(first.algorithm) + ".svg";
      write_heatmap_svg(join_path(cfg.output_dir, name), first.log.final_distribution,
                        cfg.grid.H,
                        std::string("terminal density, ") + algorithm_name(first.algorithm) +
                            ", seed " + std::to_string(first.seed),
                        stamp_seed(hash, first.seed));
    }
  }

  CheckSet checks("hypergrid");
  json per_alg = json::object();
  std::vector<std::vector<std::string>> table_rows;
  double medians[2] = {0.0, 0.0};
  for (int a = 0; a < 2; ++a) {
    std::vector<double> l1s, sampled, modes_rec, modes_fin;
    json run_rows = json::array();
    for (std::size_t s = 0; s < S; ++s) {
      const GridRunResult& res = results[static_cast<std::size_t>(a) * S + s];
      l1s.push_back(res.final_l1);
      sampled.push_back(res.sampled_l1);
      modes_rec.push_back(res.modes_rec);
      modes_fin.push_back(res.modes_final);
      run_rows.push_back(json{{"seed", res.seed},
                              {"final_l1", res.final_l1},
                              {"final_l1_sampled", res.sampled_l1},
                              {"modes_recovered", res.modes_rec},
                              {"modes_in_final_group", res.modes_final}});
    }
    medians[a] = median_of(l1s);
    const char* label = algorithm_name(algs[a]);
    std::cout << "[hypergrid] " << label << ": final l1 median=" << fmt3(medians[a])
              << " mean=" << fmt3(mean_of(l1s)) << " +- " << fmt3(sample_std(l1s))
              << " modes recovered mean=" << fmt3(mean_of(modes_rec)) << "\n";
    table_rows.push_back({label, std::to_string(S), format_double(mean_of(l1s)),
                          format_double(sample_std(l1s)), format_double(medians[a]),
                          format_double(mean_of(sampled)), format_double(median_of(sampled)),
                          format_double(mean_of(modes_rec)), format_double(mean_of(modes_fin))});
    per_alg[algorithm_file_tag(algs[a])] =
        json{{"final_l1_mean", mean_of(l1s)},
             {"final_l1_std", sample_std(l1s)},
             {"final_l1_median", medians[a]},
             {"final_l1_sampled_mean", mean_of(sampled)},
             {"final_l1_sampled_median", median_of(sampled)},
             {"modes_recovered_mean", mean_of(modes_rec)},
             {"modes_in_final_group_mean", mean_of(modes_fin)},
             {"runs", run_rows}};
  }
  write_csv(join_path(cfg.output_dir, "hypergrid_summary.csv"),
            {"algorithm", "runs", "l1_mean", "l1_std", "l1_median", "l1_sampled_mean",
             "l1_sampled_median", "modes_recovered_mean", "modes_in_final_group_mean"},
            table_rows, stamp_seeds(hash, cfg.seeds));

  const double grpo_median = medians[0];
  const double ips_median = medians[1];
  const double ratio = ips_median > 0.0 ? grpo_median / ips_median
                                        : std::numeric_limits<double>::infinity();
  checks.record("median_l1_ordering", ips_median <= grpo_median,
                "IPS-GRPO " + fmt3(ips_median) + " vs GRPO " + fmt3(grpo_median));
  if (cfg.grid.n == 2) {
    checks.record("median_l1_ratio", grpo_median >= kMedianRatioFloor * ips_median,
                  "ratio " + fmt3(ratio) + ", floor " + fmt3(kMedianRatioFloor));
  }

  json summary;
  summary["experiment"] = "hypergrid";
  summary["config_hash"] = hash_hex(hash);
  summary["seeds"] = cfg.seeds;
  summary["cells"] = env.cell_count();
  summary["mode_cells"] = modes.cells;
  summary["target_max_prob"] = target_max;
  summary["mode_mass"] = mode_mass;
  summary["median_ratio"] = ratio;
  summary["algorithms"] = per_alg;
  summary["checks"] = checks.to_json();
  write_text_file(join_path(cfg.output_dir, "hypergrid_summary.json"), summary.dump(2) + "\n");
  return checks.summarize();
}

bool run_equal_reward(const ExperimentConfig& cfg, const HarnessOptions& opts) {
  const std::uint64_t hash = config_hash(cfg);
  const GridEnv env = make_equal_reward_env();
  const ModeSet modes = make_mode_set(env);
  const std::size_t S = cfg.seeds.size();

  GridSpec path_spec;
  path_spec.n = 2;
  path_spec.H = 7;
  const std::uint64_t paths_a = count_paths(path_spec, {4, 3});
  const std::uint64_t paths_b = count_paths(path_spec, {6, 1});
  std::cout << "[equal-reward] config_hash=" << hash_hex(hash)
            << " path-count preflight: A=(4,3) paths=" << paths_a << ", B=(6,1) paths="
            << paths_b << "\n";

  Simplex target(env.cell_count(), 0.0);
  {
    double total = 0.0;
    for (double v : env.reward) total += v;
    for (std::size_t c = 0; c < env.cell_count(); ++c) target[c] = env.reward[c] / total;
  }

  if (opts.dry_run) {
    echo_config(cfg);
    std::cout << "[equal-reward] dry run: " << 2 * S << " training runs planned, none executed\n";
    return true;
  }

  fs::create_directories(cfg.output_dir);
  CheckSet checks("equal-reward");
  checks.record("path_count_preflight", paths_a == 35 && paths_b == 7,
                "A=" + std::to_string(paths_a) + " B=" + std::to_string(paths_b) +
                    ", want 35 and 7");

  const Algorithm algs[2] = {Algorithm::GRPO, Algorithm::IPSGRPO};
  std::vector<GridRunResult> results(2 * S);
  parallel_for(2 * S, opts.jobs, [&](std::size_t idx) {
    const Algorithm alg = algs[idx / S];
    const std::uint64_t seed = cfg.seeds[idx % S];
    GridRunResult res = run_grid_training(env, target, modes.cells, cfg.train, alg, seed);

    const std::string base = std::string("equalreward_run_") + algorithm_file_tag(alg) +
                             "_seed" + std::to_string(seed);
    write_run_log_csv(res.log, join_path(cfg.output_dir, base + ".csv"),
                      stamp_seed(hash, seed));
    write_run_summary_json(res.log, hash, join_path(cfg.output_dir, base + ".json"));
    results[idx] = std::move(res);
  });

  int grpo_winner_seeds = 0;
  int ips_balanced_seeds = 0;
  json run_rows = json::array();
  for (int a = 0; a < 2; ++a) {
    for (std::size_t s = 0; s < S; ++s) {
      const GridRunResult& res = results[static_cast<std::size_t>(a) * S + s];
      const double fa = final_quarter_mode_freq(res.log, 0);
      const double fb = final_quarter_mode_freq(res.log, 1);
      if (res.algorithm == Algorithm::GRPO) {
        grpo_winner_seeds += fa >= kWinnerTakeAllThreshold;
      } else {
        const bool balanced = fa >= kBalancedLow && fa <= kBalancedHigh &&
                              fb >= kBalancedLow && fb <= kBalancedHigh;
        ips_balanced_seeds += balanced;
      }
      std::cout << "[equal-reward] " << algorithm_name(res.algorithm) << " seed " << res.seed
                << ": final-quarter freq A=" << fmt3(fa) << " B=" << fmt3(fb) << "\n";
      run_rows.push_back(json{{"algorithm", algorithm_name(res.algorithm)},
                              {"seed", res.seed},
                              {"freq_a", fa},
                              {"freq_b", fb},
                              {"final_l1", res.final_l1}});
    }
  }

  const int majority = static_cast<int>(S) / 2 + 1;
  checks.record("grpo_mode_a_dominant_majority", grpo_winner_seeds >= majority,
                std::to_string(grpo_winner_seeds) + "/" + std::to_string(S) + " seeds with A >= " +
                    fmt3(kWinnerTakeAllThreshold) + ", majority needs " + std::to_string(majority));
  checks.record("ips_grpo_modes_balanced_majority", ips_balanced_seeds >= majority,
                std::to_string(ips_balanced_seeds) + "/" + std::to_string(S) +
                    " seeds with both in [" + fmt3(kBalancedLow) + ", " + fmt3(kBalancedHigh) +
                    "], majority needs " + std::to_string(majority));

  for (int a = 0; a < 2; ++a) {
    const GridRunResult& first = results[static_cast<std::size_t>(a) * S];
    const std::string tag = algorithm_file_tag(first.algorithm);
    const std::string run_stamp = stamp_seed(hash, first.seed);

    const std::vector<std::size_t> samples = final_quarter_outcomes(first.log);
    if (!samples.empty()) {
      const Simplex density = sampling_density(samples, env.cell_count());
      std::vector<std::vector<std::string>> density_rows;
      for (std::size_t c = 0; c < density.size(); ++c) {
        const Coords x = env.coords(c);
        density_rows.push_back({std::to_string(c), std::to_string(x[0]), std::to_string(x[1]),
                                format_double(density[c])});
      }
      write_csv(join_path(cfg.output_dir, "equalreward_density_" + tag + ".csv"),
                {"cell", "coord_0", "coord_1", "density"}, density_rows, run_stamp);
      write_heatmap_svg(join_path(cfg.output_dir, "equalreward_density_" + tag + ".svg"),
                        density, env.H,
                        std::string("sampling density, final quarter, ") +
                            algorithm_name(first.algorithm),
                        run_stamp);
    }

    write_quiver_svg(join_path(cfg.output_dir, "equalreward_force_" + tag + ".svg"),
                     force_field(env, first.final_policy), env.H,
                     std::string("expected step direction, ") + algorithm_name(first.algorithm),
                     run_stamp);

    const auto freq_trace = mode_frequency_trace(first.log, modes);
    std::vector<std::vector<std::string>> trace_rows;
    trace_rows.reserve(freq_trace.size());
    for (std::size_t u = 0; u < freq_trace.size(); ++u)
      trace_rows.push_back({std::to_string(u), format_double(freq_trace[u][0]),
                            format_double(freq_trace[u][1])});
    write_csv(join_path(cfg.output_dir, "equalreward_mode_trace_" + tag + ".csv"),
              {"update", "freq_a", "freq_b"}, trace_rows, run_stamp);

    write_policy_csv(env, first.final_policy,
                     join_path(cfg.output_dir, "equalreward_policy_" + tag + ".csv"), run_stamp);
  }

  {
    const RunLog& grpo_log = results[0].log;
    const RunLog& ips_log = results[S].log;
    const std::size_t rows_n = std::min(grpo_log.records.size(), ips_log.records.size());
    std::vector<std::vector<std::string>> edge_rows;
    edge_rows.reserve(rows_n);
    for (std::size_t u = 0; u < rows_n; ++u)
      edge_rows.push_back({std::to_string(u),
                           std::to_string(grpo_log.records[u].distinct_edges),
                           std::to_string(ips_log.records[u].distinct_edges)});
    write_csv(join_path(cfg.output_dir, "equalreward_path_exploration.csv"),
              {"update", "distinct_edges_grpo", "distinct_edges_ips_grpo"}, edge_rows,
              stamp_seed(hash, cfg.seeds.front()));
  }

  json summary;
  summary["experiment"] = "equal-reward";
  summary["config_hash"] = hash_hex(hash);
  summary["seeds"] = cfg.seeds;
  summary["paths_a"] = paths_a;
  summary["paths_b"] = paths_b;
  summary["mode_cells"] = modes.cells;
  summary["grpo_winner_seeds"] = grpo_winner_seeds;
  summary["ips_balanced_seeds"] = ips_balanced_seeds;
  summary["majority"] = majority;
  summary["runs"] = run_rows;
  summary["checks"] = checks.to_json();
  write_text_file(join_path(cfg.output_dir, "equalreward_summary.json"),
                  summary.dump(2) + "\n");
  return checks.summarize();
}

bool run_ablation(const ExperimentConfig& cfg, const HarnessOptions& opts) {
  const std::uint64_t hash = config_hash(cfg);
  const GridEnv env = make_hypergrid_env(cfg.grid);
  const Simplex target = enumerate_target(cfg.grid);
  const ModeSet modes = make_mode_set(env);
  const std::size_t S = cfg.seeds.size();

  std::vector<double> eps_list = cfg.ablation_clip_epsilons;
  if (std::find(eps_list.begin(), eps_list.end(), 1.0) == eps_list.end())
    eps_list.push_back(1.0);

  struct Cell {
    Algorithm algorithm = Algorithm::IPSGRPO;
    int group_size = 0;
    double clip_eps = 1.0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string message;
    double final_l1 = std::numeric_limits<double>::quiet_NaN();
    int modes_rec = 0;
    Simplex final_distribution;
  };

  std::vector<Cell> cells;
  for (int g : cfg.ablation_group_sizes)
    for (double eps : eps_list)
      for (std::uint64_t seed : cfg.seeds)
        cells.push_back(Cell{Algorithm::IPSGRPO, g, eps, seed, false, "", 0.0, 0, {}});
  const std::size_t sweep_count = cells.size();
  for (int g : cfg.ablation_group_sizes)
    for (std::uint64_t seed : cfg.seeds)
      cells.push_back(Cell{Algorithm::GRPO, g, 1.0, seed, false, "", 0.0, 0, {}});

  std::cout << "[ablation] config_hash=" << hash_hex(hash) << " sweep "
            << cfg.ablation_group_sizes.size() << "x" << eps_list.size() << " over " << S
            << " seeds: " << sweep_count << " sweep runs + " << cells.size() - sweep_count
            << " baselines\n";
  if (opts.dry_run) {
    echo_config(cfg);
    std::cout << "[ablation] dry run: " << cells.size() << " runs planned, none executed\n";
    return true;
  }

  fs::create_directories(cfg.output_dir);
  parallel_for(cells.size(), opts.jobs, [&](std::size_t idx) {
    Cell& cell = cells[idx];
    try {
      TrainConfig tc = cfg.train;
      tc.group_size = cell.group_size;
      if (cell.algorithm == Algorithm::IPSGRPO) tc.clip_eps = cell.clip_eps;
      const GridRunResult res =
          run_grid_training(env, target, modes.cells, tc, cell.algorithm, cell.seed);
      cell.final_l1 = res.final_l1;
      cell.modes_rec = res.modes_rec;
      cell.final_distribution = res.log.final_distribution;
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.message = e.what();
    }
  });

  const std::string agg_stamp = stamp_seeds(hash, cfg.seeds);
  std::size_t failed = 0;
  std::vector<std::vector<std::string>> cell_rows;
  for (std::size_t i = 0; i < sweep_count; ++i) {
    const Cell& c = cells[i];
    failed += !c.ok;
    cell_rows.push_back({std::to_string(c.group_size), format_double(c.clip_eps),
                         std::to_string(c.seed), c.ok ? "ok" : "failed",
                         format_double(c.final_l1), std::to_string(c.modes_rec)});
  }
  write_csv(join_path(cfg.output_dir, "ablation_cells.csv"),
            {"group_size", "clip_eps", "seed", "status", "final_l1", "modes_recovered"},
            cell_rows, agg_stamp);

  std::vector<std::vector<std::string>> baseline_rows;
  for (std::size_t i = sweep_count; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    failed += !c.ok;
    baseline_rows.push_back({std::to_string(c.group_size), std::to_string(c.seed),
                             c.ok ? "ok" : "failed", format_double(c.final_l1),
                             std::to_string(c.modes_rec)});
  }
  write_csv(join_path(cfg.output_dir, "ablation_baseline.csv"),
            {"group_size", "seed", "status", "final_l1", "modes_recovered"}, baseline_rows,
            agg_stamp);

  std::vector<std::vector<std::string>> table_rows;
  for (int g : cfg.ablation_group_sizes) {
    for (double eps : eps_list) {
      std::vector<double> l1s, recs;
      for (const Cell& c : cells) {
        if (c.algorithm != Algorithm::IPSGRPO || c.group_size != g || c.clip_eps != eps ||
            !c.ok)
          continue;
        l1s.push_back(c.final_l1);
        recs.push_back(c.modes_rec);
      }
      table_rows.push_back({std::to_string(g), format_double(eps),
                            std::to_string(l1s.size()), format_double(mean_of(l1s)),
                            format_double(sample_std(l1s)), format_double(mean_of(recs))});
    }
  }
  write_csv(join_path(cfg.output_dir, "ablation_table.csv"),
            {"group_size", "clip_eps", "runs_ok", "l1_mean", "l1_std",
             "modes_recovered_mean"},
            table_rows, agg_stamp);

  std::size_t sanity_compared = 0;
  std::size_t sanity_mismatched = 0;
  for (std::size_t i = 0; i < sweep_count; ++i) {
    const Cell& c = cells[i];
    if (c.clip_eps != 1.0 || !c.ok) continue;
    for (std::size_t b = sweep_count; b < cells.size(); ++b) {
      const Cell& base = cells[b];
      if (!base.ok || base.group_size != c.group_size || base.seed != c.seed) continue;
      ++sanity_compared;
      sanity_mismatched += !(c.final_distribution == base.final_distribution);
    }
  }

  CheckSet checks("ablation");
  checks.record("all_cells_completed", failed == 0,
                std::to_string(cells.size() - failed) + "/" + std::to_string(cells.size()) +
                    " runs ok");
  checks.record("clip_eps_one_matches_plain", sanity_mismatched == 0 && sanity_compared > 0,
                std::to_string(sanity_compared) + " pairs compared, " +
                    std::to_string(sanity_mismatched) + " mismatched");
  for (const Cell& c : cells) {
    if (c.ok) continue;
    std::cout << "[ablation] failed cell: algorithm=" << algorithm_name(c.algorithm)
              << " G=" << c.group_size << " eps=" << fmt3(c.clip_eps) << " seed=" << c.seed
              << ": " << c.message << "\n";
  }

  json summary;
  summary["experiment"] = "ablation";
  summary["config_hash"] = hash_hex(hash);
  summary["seeds"] = cfg.seeds;
  summary["group_sizes"] = cfg.ablation_group_sizes;
  summary["clip_epsilons"] = eps_list;
  summary["sweep_runs"] = sweep_count;
  summary["baseline_runs"] = cells.size() - sweep_count;
  summary["failed_runs"] = failed;
  summary["sanity_pairs_compared"] = sanity_compared;
  summary["sanity_pairs_mismatched"] = sanity_mismatched;
  json failures = json::array();
  for (const Cell& c : cells)
    if (!c.ok)
      failures.push_back(json{{"algorithm", algorithm_name(c.algorithm)},
                              {"group_size", c.group_size},
                              {"clip_eps", c.clip_eps},
                              {"seed", c.seed},
                              {"message", c.message}});
  summary["failures"] = failures;
  summary["checks"] = checks.to_json();
  write_text_file(join_path(cfg.output_dir, "ablation_summary.json"), summary.dump(2) + "\n");
  return checks.summarize();
}

bool run_oracle_dump(const ExperimentConfig& cfg, const HarnessOptions& opts) {
  const std::uint64_t hash = config_hash(cfg);
  const GridSpec& spec = cfg.grid;
  const Simplex target = enumerate_target(spec);
  const std::vector<Coords> mode_coords = argmax_reward_cells(spec);
  const double target_sum = std::accumulate(target.begin(), target.end(), 0.0);
  const double target_max = *std::max_element(target.begin(), target.end());

  std::cout << "[oracle-dump] config_hash=" << hash_hex(hash) << " n=" << spec.n
            << " H=" << spec.H << " cells=" << target.size() << " modes=" << mode_coords.size()
            << " target sum=" << format_double(target_sum) << " max p=" << fmt3(target_max)
            << "\n";
  if (opts.dry_run) {
    echo_config(cfg);
    std::cout << "[oracle-dump] dry run: no tables written\n";
    return true;
  }

  fs::create_directories(cfg.output_dir);
  const std::string stamp = stamp_unseeded(hash);

  std::vector<std::string> target_header = {"cell"};
  for (int d = 0; d < spec.n; ++d) target_header.push_back("coord_" + std::to_string(d));
  target_header.push_back("reward");
  target_header.push_back("target_prob");
  std::vector<std::vector<std::string>> target_rows;
  target_rows.reserve(target.size());
  for (std::size_t c = 0; c < target.size(); ++c) {
    const Coords x = cell_coords(spec, c);
    std::vector<std::string> row = {std::to_string(c)};
    for (int v : x) row.push_back(std::to_string(v));
    row.push_back(format_double(terminal_reward(spec, x)));
    row.push_back(format_double(target[c]));
    target_rows.push_back(std::move(row));
  }
  const std::string target_path = join_path(cfg.output_dir, "oracle_target.csv");
  write_csv(target_path, target_header, target_rows, stamp);

  std::vector<std::string> path_header = {"cell"};
  for (int d = 0; d < spec.n; ++d) path_header.push_back("coord_" + std::to_string(d));
  path_header.push_back("paths");
  std::vector<std::vector<std::string>> path_rows;
  path_rows.reserve(target.size());
  for (std::size_t c = 0; c < target.size(); ++c) {
    const Coords x = cell_coords(spec, c);
    std::vector<std::string> row = {std::to_string(c)};
    for (int v : x) row.push_back(std::to_string(v));
    row.push_back(std::to_string(count_paths(spec, x)));
    path_rows.push_back(std::move(row));
  }
  write_csv(join_path(cfg.output_dir, "oracle_paths.csv"), path_header, path_rows, stamp);

  std::vector<std::string> mode_header = {"cell"};
  for (int d = 0; d < spec.n; ++d) mode_header.push_back("coord_" + std::to_string(d));
  std::vector<std::vector<std::string>> mode_rows;
  for (const Coords& x : mode_coords) {
    std::vector<std::string> row = {std::to_string(cell_index(spec, x))};
    for (int v : x) row.push_back(std::to_string(v));
    mode_rows.push_back(std::move(row));
  }
  write_csv(join_path(cfg.output_dir, "oracle_modes.csv"), mode_header, mode_rows, stamp);

  if (spec.n == 2)
    write_heatmap_svg(join_path(cfg.output_dir, "oracle_target.svg"), target, spec.H,
                      "reward-proportional target density", stamp);

  CheckSet checks("oracle-dump");
  const auto loaded = read_csv(target_path);
  std::size_t mismatched = 0;
  bool shape_ok = loaded.size() == target.size() + 1;
  if (shape_ok) {
    for (std::size_t i = 1; i < loaded.size(); ++i) {
      const auto& row = loaded[i];
      if (row.size() != target_header.size()) {
        shape_ok = false;
        break;
      }
      const std::size_t cell = std::stoul(row[0]);
      const double prob = std::stod(row[static_cast<std::size_t>(spec.n) + 2]);
      if (cell >= target.size() || prob != target[cell]) ++mismatched;
    }
  }
  checks.record("target_table_round_trip", shape_ok && mismatched == 0,
                shape_ok ? std::to_string(mismatched) + " of " + std::to_string(target.size()) +
                               " rows mismatched"
                         : "row shape mismatch");

  json summary;
  summary["experiment"] = "oracle-dump";
  summary["config_hash"] = hash_hex(hash);
  summary["seed"] = "none";
  summary["cells"] = target.size();
  summary["target_sum"] = target_sum;
  summary["target_max_prob"] = target_max;
  json modes_json = json::array();
  for (const Coords& x : mode_coords) modes_json.push_back(x);
  summary["modes"] = modes_json;
  summary["checks"] = checks.to_json();
  write_text_file(join_path(cfg.output_dir, "oracle_summary.json"), summary.dump(2) + "\n");
  return checks.summarize();
}

int run_experiment(const ExperimentConfig& cfg, const HarnessOptions& opts) {
  HarnessOptions local = opts;
  if (local.jobs < 1) local.jobs = 1;
  bool ok = false;
  switch (cfg.experiment) {
    case Experiment::BanditFlow:
      ok = run_bandit_flow(cfg, local);
      break;
    case Experiment::BanditStochastic:
      ok = run_bandit_stochastic(cfg, local);
      break;
    case Experiment::Hypergrid:
      ok = run_hypergrid(cfg, local);
      break;
    case Experiment::EqualReward:
      ok = run_equal_reward(cfg, local);
      break;
    case Experiment::Ablation:
      ok = run_ablation(cfg, local);
      break;
    case Experiment::OracleDump:
      ok = run_oracle_dump(cfg, local);
      break;
  }
  return ok ? 0 : 1;
}

}  // namespace ipslab
