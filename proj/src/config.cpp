#include "ipslab/config.hpp"

#include <set>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "ipslab/io_util.hpp"

namespace ipslab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error("config error at '" + path + "': " + what);
}

// Tracks which keys of one JSON object were consumed so leftovers can be
// rejected with their full path.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  std::string key_path(const char* key) const { return path_ + "." + key; }

  bool has(const char* key) {
    return j_.contains(key);
  }

  const json* take(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const char* key, double def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_number()) fail(key_path(key), "expected a number");
    return v->get<double>();
  }

  int integer(const char* key, int def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_number_integer()) fail(key_path(key), "expected an integer");
    return v->get<int>();
  }

  bool boolean(const char* key, bool def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_boolean()) fail(key_path(key), "expected a boolean");
    return v->get<bool>();
  }

  std::string text(const char* key, const std::string& def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_string()) fail(key_path(key), "expected a string");
    return v->get<std::string>();
  }

  std::vector<double> number_list(const char* key, std::vector<double> def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_array()) fail(key_path(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number()) fail(key_path(key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<int> integer_list(const char* key, std::vector<int> def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_array()) fail(key_path(key), "expected an array of integers");
    std::vector<int> out;
    for (const auto& e : *v) {
      if (!e.is_number_integer()) fail(key_path(key), "expected an array of integers");
      out.push_back(e.get<int>());
    }
    return out;
  }

  std::vector<std::uint64_t> u64_list(const char* key, std::vector<std::uint64_t> def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_array()) fail(key_path(key), "expected an array of integers");
    std::vector<std::uint64_t> out;
    for (const auto& e : *v) {
      if (!e.is_number_integer() || (e.is_number_integer() && e.get<std::int64_t>() < 0 &&
                                     !e.is_number_unsigned()))
        fail(key_path(key), "expected an array of nonnegative integers");
      out.push_back(e.get<std::uint64_t>());
    }
    return out;
  }

  // Requires the section key to be present and returns it as an object.
  const json& section(const char* key) {
    const json* v = take(key);
    if (!v) fail(path_ + "." + key, "required section is missing");
    if (!v->is_object()) fail(key_path(key), "expected an object");
    return *v;
  }

  void forbid(const char* key, const char* why) {
    if (j_.contains(key)) fail(key_path(key), why);
  }

  // Call after all expected keys were taken.
  void finish() {
    for (const auto& [key, value] : j_.items()) {
      (void)value;
      if (!seen_.count(key)) fail(path_ + "." + key, "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

GridSpec parse_grid(const json& j, const std::string& path) {
  Section s(j, path);
  GridSpec grid;
  grid.n = s.integer("n", grid.n);
  grid.H = s.integer("H", grid.H);
  grid.R0 = s.number("R0", grid.R0);
  grid.R1 = s.number("R1", grid.R1);
  grid.R2 = s.number("R2", grid.R2);
  s.finish();
  try {
    validate(grid);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return grid;
}

TrainConfig parse_train(const json& j, const std::string& path, bool sweep,
                        std::vector<int>* group_sizes, std::vector<double>* clip_epsilons) {
  Section s(j, path);
  TrainConfig train;
  if (sweep) {
    s.forbid("group_size", "the ablation sweeps group sizes; use 'group_sizes'");
    s.forbid("clip_eps", "the ablation sweeps clip epsilons; use 'clip_epsilons'");
    *group_sizes = s.integer_list("group_sizes", *group_sizes);
    *clip_epsilons = s.number_list("clip_epsilons", *clip_epsilons);
    if (group_sizes->empty()) fail(s.key_path("group_sizes"), "must be nonempty");
    if (clip_epsilons->empty()) fail(s.key_path("clip_epsilons"), "must be nonempty");
    for (int g : *group_sizes)
      if (g < 1) fail(s.key_path("group_sizes"), "group sizes must be positive");
    for (double e : *clip_epsilons)
      if (e <= 0.0 || e > 1.0) fail(s.key_path("clip_epsilons"), "must lie in (0, 1]");
  } else {
    s.forbid("group_sizes", "sweep lists are only valid for the ablation experiment");
    s.forbid("clip_epsilons", "sweep lists are only valid for the ablation experiment");
    train.group_size = s.integer("group_size", train.group_size);
    train.clip_eps = s.number("clip_eps", train.clip_eps);
  }
  s.forbid("algorithm", "the harness always runs both algorithms; there is no choice here");
  s.forbid("seed", "seeds are configured by the top-level 'seeds' list");
  train.learning_rate = s.number("learning_rate", train.learning_rate);
  train.entropy_coef = s.number("entropy_coef", train.entropy_coef);
  train.kl_coef = s.number("kl_coef", train.kl_coef);
  train.updates = s.integer("updates", train.updates);
  train.ppo_clip_ratio = s.number("ppo_clip_ratio", train.ppo_clip_ratio);
  train.inner_epochs = s.integer("inner_epochs", train.inner_epochs);
  train.init_terminate_logit = s.number("init_terminate_logit", train.init_terminate_logit);
  s.finish();
  if (!sweep && train.group_size < 1) fail(s.key_path("group_size"), "must be positive");
  if (!sweep && (train.clip_eps <= 0.0 || train.clip_eps > 1.0))
    fail(s.key_path("clip_eps"), "must lie in (0, 1]");
  if (train.learning_rate <= 0.0) fail(s.key_path("learning_rate"), "must be positive");
  if (train.entropy_coef < 0.0) fail(s.key_path("entropy_coef"), "must be nonnegative");
  if (train.kl_coef < 0.0) fail(s.key_path("kl_coef"), "must be nonnegative");
  if (train.updates < 0) fail(s.key_path("updates"), "must be nonnegative");
  if (train.ppo_clip_ratio <= 0.0) fail(s.key_path("ppo_clip_ratio"), "must be positive");
  if (train.inner_epochs < 1) fail(s.key_path("inner_epochs"), "must be at least 1");
  return train;
}

Integrator parse_integrator(const std::string& name, const std::string& path) {
  if (name == "RK4") return Integrator::RK4;
  if (name == "Euler") return Integrator::Euler;
  fail(path, "expected 'RK4' or 'Euler'");
}

FlowConfig parse_flow(const json& j, const std::string& path) {
  Section s(j, path);
  FlowConfig flow;
  s.forbid("objective", "the harness integrates both objectives; there is no choice here");
  flow.rewards = s.number_list("rewards", {});
  if (flow.rewards.size() < 2) fail(s.key_path("rewards"), "need at least two rewards");
  double reward_sum = 0.0;
  for (double v : flow.rewards) {
    if (v < 0.0) fail(s.key_path("rewards"), "must be nonnegative");
    reward_sum += v;
  }
  if (reward_sum <= 0.0) fail(s.key_path("rewards"), "sum must be positive");
  flow.init_logits = s.number_list("init_logits", Logits(flow.rewards.size(), 0.0));
  if (flow.init_logits.size() != flow.rewards.size())
    fail(s.key_path("init_logits"), "length must match 'rewards'");
  flow.step_size = s.number("step_size", flow.step_size);
  flow.horizon = s.number("horizon", flow.horizon);
  flow.integrator =
      parse_integrator(s.text("integrator", "RK4"), s.key_path("integrator"));
  s.finish();
  if (flow.step_size <= 0.0) fail(s.key_path("step_size"), "must be positive");
  if (flow.horizon < flow.step_size)
    fail(s.key_path("horizon"), "must be at least one step long");
  return flow;
}

StochasticRunConfig parse_stochastic(const json& j, const std::string& path,
                                     double* init_noise) {
  Section s(j, path);
  StochasticRunConfig run;
  s.forbid("objective", "the harness runs both objectives; there is no choice here");
  s.forbid("seed", "seeds are configured by the top-level 'seeds' list");
  run.rewards = s.number_list("rewards", {});
  if (run.rewards.size() < 2) fail(s.key_path("rewards"), "need at least two rewards");
  double reward_sum = 0.0;
  for (double v : run.rewards) {
    if (v < 0.0) fail(s.key_path("rewards"), "must be nonnegative");
    reward_sum += v;
  }
  if (reward_sum <= 0.0) fail(s.key_path("rewards"), "sum must be positive");
  run.init_logits = s.number_list("init_logits", Logits(run.rewards.size(), 0.0));
  if (run.init_logits.size() != run.rewards.size())
    fail(s.key_path("init_logits"), "length must match 'rewards'");
  run.group_size = s.integer("group_size", run.group_size);
  run.learning_rate = s.number("learning_rate", run.learning_rate);
  run.updates = s.integer("updates", run.updates);
  run.clip_eps = s.number("clip_eps", run.clip_eps);
  run.use_group_baseline = s.boolean("use_group_baseline", run.use_group_baseline);
  *init_noise = s.number("init_noise_scale", *init_noise);
  s.finish();
  if (run.group_size < 1) fail(s.key_path("group_size"), "must be positive");
  if (run.learning_rate <= 0.0) fail(s.key_path("learning_rate"), "must be positive");
  if (run.updates < 0) fail(s.key_path("updates"), "must be nonnegative");
  if (run.clip_eps <= 0.0 || run.clip_eps >= 1.0)
    fail(s.key_path("clip_eps"), "must lie in (0, 1)");
  if (*init_noise < 0.0) fail(s.key_path("init_noise_scale"), "must be nonnegative");
  return run;
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::BanditFlow: return "bandit-flow";
    case Experiment::BanditStochastic: return "bandit-stochastic";
    case Experiment::Hypergrid: return "hypergrid";
    case Experiment::EqualReward: return "equal-reward";
    case Experiment::Ablation: return "ablation";
    case Experiment::OracleDump: return "oracle-dump";
  }
  return "unknown";
}

Experiment parse_experiment_name(const std::string& name) {
  if (name == "bandit-flow") return Experiment::BanditFlow;
  if (name == "bandit-stochastic") return Experiment::BanditStochastic;
  if (name == "hypergrid") return Experiment::Hypergrid;
  if (name == "equal-reward") return Experiment::EqualReward;
  if (name == "ablation") return Experiment::Ablation;
  if (name == "oracle-dump") return Experiment::OracleDump;
  throw std::runtime_error("config error at 'experiment': unknown experiment '" + name + "'");
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config error: invalid JSON: ") + e.what());
  }
  Section top(j, "config");
  ExperimentConfig cfg;

  const json* exp = top.take("experiment");
  if (!exp) fail("config.experiment", "required key is missing");
  if (!exp->is_string()) fail("config.experiment", "expected a string");
  cfg.experiment = parse_experiment_name(exp->get<std::string>());

  cfg.seeds = top.u64_list("seeds", cfg.seeds);
  if (cfg.seeds.empty()) fail("config.seeds", "must be nonempty");
  cfg.output_dir = top.text("output_dir", cfg.output_dir);
  if (cfg.output_dir.empty()) fail("config.output_dir", "must be nonempty");

  const bool wants_grid = cfg.experiment == Experiment::Hypergrid ||
                          cfg.experiment == Experiment::Ablation ||
                          cfg.experiment == Experiment::OracleDump;
  const bool wants_train = cfg.experiment == Experiment::Hypergrid ||
                           cfg.experiment == Experiment::EqualReward ||
                           cfg.experiment == Experiment::Ablation;
  const bool wants_flow = cfg.experiment == Experiment::BanditFlow;
  const bool wants_stochastic = cfg.experiment == Experiment::BanditStochastic;

  if (wants_grid) {
    cfg.grid = parse_grid(top.section("grid"), "config.grid");
  } else {
    top.forbid("grid", "this experiment takes no grid section");
  }
  if (wants_train) {
    cfg.train = parse_train(top.section("train"), "config.train",
                            cfg.experiment == Experiment::Ablation,
                            &cfg.ablation_group_sizes, &cfg.ablation_clip_epsilons);
  } else {
    top.forbid("train", "this experiment takes no train section");
  }
  if (wants_flow) {
    cfg.flow = parse_flow(top.section("flow"), "config.flow");
  } else {
    top.forbid("flow", "this experiment takes no flow section");
  }
  if (wants_stochastic) {
    cfg.stochastic = parse_stochastic(top.section("stochastic"), "config.stochastic",
                                      &cfg.stochastic_init_noise);
  } else {
    top.forbid("stochastic", "this experiment takes no stochastic section");
  }
  top.finish();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_text_file(path));
}

std::string canonical_config_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = experiment_name(cfg.experiment);
  j["seeds"] = cfg.seeds;
  switch (cfg.experiment) {
    case Experiment::OracleDump:
      j["grid"] = {{"n", cfg.grid.n}, {"H", cfg.grid.H},
                   {"R0", cfg.grid.R0}, {"R1", cfg.grid.R1}, {"R2", cfg.grid.R2}};
      break;
    case Experiment::Hypergrid:
    case Experiment::Ablation:
      j["grid"] = {{"n", cfg.grid.n}, {"H", cfg.grid.H},
                   {"R0", cfg.grid.R0}, {"R1", cfg.grid.R1}, {"R2", cfg.grid.R2}};
      [[fallthrough]];
    case Experiment::EqualReward: {
      json t = {{"learning_rate", cfg.train.learning_rate},
                {"entropy_coef", cfg.train.entropy_coef},
                {"kl_coef", cfg.train.kl_coef},
                {"updates", cfg.train.updates},
                {"ppo_clip_ratio", cfg.train.ppo_clip_ratio},
                {"inner_epochs", cfg.train.inner_epochs},
                {"init_terminate_logit", cfg.train.init_terminate_logit}};
      if (cfg.experiment == Experiment::Ablation) {
        t["group_sizes"] = cfg.ablation_group_sizes;
        t["clip_epsilons"] = cfg.ablation_clip_epsilons;
      } else {
        t["group_size"] = cfg.train.group_size;
        t["clip_eps"] = cfg.train.clip_eps;
      }
      j["train"] = t;
      break;
    }
    case Experiment::BanditFlow:
      j["flow"] = {{"rewards", cfg.flow.rewards},
                   {"init_logits", cfg.flow.init_logits},
                   {"step_size", cfg.flow.step_size},
                   {"horizon", cfg.flow.horizon},
                   {"integrator", cfg.flow.integrator == Integrator::RK4 ? "RK4" : "Euler"}};
      break;
    case Experiment::BanditStochastic:
      j["stochastic"] = {{"rewards", cfg.stochastic.rewards},
                         {"init_logits", cfg.stochastic.init_logits},
                         {"group_size", cfg.stochastic.group_size},
                         {"learning_rate", cfg.stochastic.learning_rate},
                         {"updates", cfg.stochastic.updates},
                         {"clip_eps", cfg.stochastic.clip_eps},
                         {"use_group_baseline", cfg.stochastic.use_group_baseline},
                         {"init_noise_scale", cfg.stochastic_init_noise}};
      break;
  }
  return j.dump();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  return fnv1a64(canonical_config_json(cfg));
}

}  // namespace ipslab
