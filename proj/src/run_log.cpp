#include "ipslab/run_log.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

#include "ipslab/io_util.hpp"

namespace ipslab {

const char* algorithm_name(Algorithm algorithm) {
  return algorithm == Algorithm::GRPO ? "GRPO" : "IPS-GRPO";
}

void write_run_log_csv(const RunLog& log, const std::string& path,
                       const std::string& stamp) {
  std::vector<std::string> header = {"update", "l1_exact", "modes_in_group", "entropy", "kl"};
  for (std::size_t m = 0; m < log.tracked_modes.size(); ++m)
    header.push_back("mode_" + std::to_string(m) + "_count");
  header.push_back("distinct_edges");

  std::vector<std::vector<std::string>> rows;
  rows.reserve(log.records.size());
  for (std::size_t u = 0; u < log.records.size(); ++u) {
    const UpdateRecord& rec = log.records[u];
    std::vector<std::string> row;
    row.push_back(std::to_string(u));
    row.push_back(format_double(rec.l1_exact));
    int present = 0;
    for (int c : rec.mode_counts) present += (c > 0);
    row.push_back(std::to_string(present));
    row.push_back(format_double(rec.mean_entropy));
    row.push_back(format_double(rec.mean_kl));
    for (int c : rec.mode_counts) row.push_back(std::to_string(c));
    row.push_back(std::to_string(rec.distinct_edges));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows, stamp);
}

namespace {

nlohmann::json config_echo(const TrainConfig& cfg) {
  return nlohmann::json{{"algorithm", algorithm_name(cfg.algorithm)},
                        {"group_size", cfg.group_size},
                        {"clip_eps", cfg.clip_eps},
                        {"learning_rate", cfg.learning_rate},
                        {"entropy_coef", cfg.entropy_coef},
                        {"kl_coef", cfg.kl_coef},
                        {"updates", cfg.updates},
                        {"seed", cfg.seed},
                        {"ppo_clip_ratio", cfg.ppo_clip_ratio},
                        {"inner_epochs", cfg.inner_epochs},
                        {"init_terminate_logit", cfg.init_terminate_logit}};
}

}  // namespace

void write_run_summary_json(const RunLog& log, std::uint64_t config_hash,
                            const std::string& path) {
  nlohmann::json j;
  j["config"] = config_echo(log.config);
  j["config_hash"] = hash_hex(config_hash);
  j["seed"] = log.config.seed;
  j["updates"] = log.records.size();
  j["final_l1"] =
      log.records.empty() ? nlohmann::json() : nlohmann::json(log.records.back().l1_exact);

  nlohmann::json collapse;
  if (!log.final_distribution.empty()) {
    const auto it =
        std::max_element(log.final_distribution.begin(), log.final_distribution.end());
    collapse["final_max_prob"] = *it;
    collapse["final_argmax_cell"] =
        static_cast<std::size_t>(it - log.final_distribution.begin());
  }
  if (!log.records.empty()) {
    collapse["final_mode_counts"] = log.records.back().mode_counts;
    int present = 0;
    for (int c : log.records.back().mode_counts) present += (c > 0);
    collapse["modes_in_final_group"] = present;
  }
  j["collapse"] = collapse;
  j["tracked_modes"] = log.tracked_modes;
  write_text_file(path, j.dump(2) + "\n");
}

void write_policy_csv(const GridEnv& env, const TabularPolicy& policy,
                      const std::string& path, const std::string& stamp) {
  if (policy.logits.size() != env.cell_count() * env.action_count())
    throw std::invalid_argument("write_policy_csv: policy does not match the grid");
  std::vector<std::string> header;
  for (int d = 0; d < env.n; ++d) header.push_back("coord_" + std::to_string(d));
  for (int d = 0; d < env.n; ++d) header.push_back("logit_inc_" + std::to_string(d));
  header.push_back("logit_terminate");

  std::vector<std::vector<std::string>> rows;
  rows.reserve(env.cell_count());
  for (std::size_t cell = 0; cell < env.cell_count(); ++cell) {
    const Coords x = env.coords(cell);
    std::vector<std::string> row;
    for (int v : x) row.push_back(std::to_string(v));
    for (int a = 0; a < env.action_count(); ++a)
      row.push_back(format_double(policy.logit(cell, a)));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows, stamp);
}

}  // namespace ipslab
