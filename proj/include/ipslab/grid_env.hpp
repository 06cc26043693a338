#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ipslab/hypergrid.hpp"

namespace ipslab {

// Flattened grid MDP. Every episode starts at the origin, moves by unit
// increments, and ends with a Terminate action that pays the terminal
// reward of the current cell. Absorbing cells admit only Terminate.
//
// Action ids are 0..n-1 for the unit increments and n for Terminate.
struct GridEnv {
  std::string name;
  int n = 0;
  int H = 0;
  std::vector<double> reward;   // size H^n, terminal reward per cell
  std::vector<bool> absorbing;  // size H^n

  std::size_t cell_count() const { return reward.size(); }
  std::size_t index(const Coords& x) const;
  Coords coords(std::size_t idx) const;

  int action_count() const { return n + 1; }
  int terminate_action() const { return n; }

  // Valid action ids at a live cell: increments that stay on the grid plus
  // Terminate, or Terminate alone when the cell is absorbing.
  std::vector<int> valid_action_ids(std::size_t cell) const;

  // Applies an increment action id; Terminate is not a transition.
  std::size_t next_cell(std::size_t cell, int action) const;
};

// R0/R1/R2 hyper-grid with no absorbing cells.
GridEnv make_hypergrid_env(const GridSpec& spec);

// 7x7 grid with two absorbing goal cells of equal reward but unequal
// path multiplicity, over a low-reward floor.
GridEnv make_equal_reward_env();

}  // namespace ipslab
