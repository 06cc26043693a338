#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ipslab/grid_env.hpp"
#include "ipslab/simplex.hpp"
#include "ipslab/tabular_policy.hpp"
#include "ipslab/trainer.hpp"

namespace ipslab {

// The argmax-reward cells of a grid, kept both as coordinate tuples and as
// flat cell indices.
struct ModeSet {
  std::vector<Coords> modes;
  std::vector<std::size_t> cells;

  bool contains(std::size_t cell) const;
};

// Collects the cells attaining the maximum terminal reward of the grid.
ModeSet make_mode_set(const GridEnv& env);

// Step curve of (samples drawn, distinct modes recovered so far); one point
// per sample, monotone nondecreasing with unit steps.
std::vector<std::pair<std::size_t, int>> mode_recovery_curve(
    const std::vector<std::size_t>& outcome_stream, const ModeSet& modes);

// Per-update fraction of the group's trajectories terminating in each mode;
// fractions within an update sum to at most 1.
std::vector<std::vector<double>> mode_frequency_trace(const RunLog& log,
                                                      const ModeSet& modes);

// Number of tracked modes sampled at least once across the whole run.
int modes_recovered(const RunLog& log);

// Expected displacement per cell: component d is the probability of the
// increment action along dimension d, so Terminate contributes nothing.
std::vector<std::vector<double>> force_field(const GridEnv& env,
                                             const TabularPolicy& policy);

// Empirical distribution of samples over cells; rejects an empty sample
// list rather than returning a zero grid.
Simplex sampling_density(const std::vector<std::size_t>& samples, std::size_t cell_count);

}  // namespace ipslab
