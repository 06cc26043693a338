#pragma once

#include <cstdint>
#include <string>

#include "ipslab/trainer.hpp"

namespace ipslab {

// One row per update: update, l1_exact, modes_in_group, entropy, kl, one
// count column per tracked mode, distinct_edges. A nonempty stamp becomes
// the leading '#' comment line.
void write_run_log_csv(const RunLog& log, const std::string& path,
                       const std::string& stamp = "");

// JSON summary: final l1, collapse diagnostics, config echo, seed, and the
// caller's config hash.
void write_run_summary_json(const RunLog& log, std::uint64_t config_hash,
                            const std::string& path);

// Flat checkpoint table: one row per cell with its coordinates followed by
// the logits for each increment action and Terminate.
void write_policy_csv(const GridEnv& env, const TabularPolicy& policy,
                      const std::string& path, const std::string& stamp = "");

const char* algorithm_name(Algorithm algorithm);

}  // namespace ipslab
