#pragma once

#include <cstdint>
#include <vector>

#include "ipslab/simplex.hpp"

namespace ipslab {

// n-dimensional grid with side H and a three-level terminal reward:
// R(x) = R0 + R1 * prod_d 1(|a_d| > 0.5) + R2 * prod_d 1(0.6 < |a_d| < 0.8)
// where a_d = 2 x_d / (H - 1) - 1 maps coordinates onto [-1, 1].
struct GridSpec {
  int n = 2;
  int H = 8;
  double R0 = 0.1;
  double R1 = 0.5;
  double R2 = 2.0;
};

using Coords = std::vector<int>;

struct GridState {
  Coords coords;
  bool terminated = false;
};

// Action kinds: one increment per dimension plus Terminate.
struct GridAction {
  static constexpr int kTerminate = -1;
  int dim = kTerminate;  // 0..n-1 increments; kTerminate ends the episode

  static GridAction increment(int d) { return GridAction{d}; }
  static GridAction terminate() { return GridAction{kTerminate}; }
  bool is_terminate() const { return dim == kTerminate; }
};

// Validates 0 < R0 < R1 < R2 and H >= 2, n >= 1.
void validate(const GridSpec& spec);

// a_d = 2 x_d / (H - 1) - 1 for each dimension.
std::vector<double> normalized_coord(const GridSpec& spec, const Coords& x);

// Terminal reward with strict inequalities in both indicator products.
double terminal_reward(const GridSpec& spec, const Coords& x);

// Terminate always valid; Increment(d) valid iff coords[d] < H - 1.
std::vector<GridAction> valid_actions(const GridSpec& spec, const GridState& s);

// Applies an action. Terminate yields the terminal reward; increments
// yield no reward. Throws std::invalid_argument for invalid actions and
// std::logic_error when the state is already terminated.
struct StepResult {
  GridState next;
  bool has_reward = false;
  double reward = 0.0;
};
StepResult step(const GridSpec& spec, const GridState& s, const GridAction& a);

// Target distribution p(o) proportional to R(o) over all H^n cells, in
// row-major order with the last coordinate fastest. Throws
// std::runtime_error when H^n exceeds the enumeration cap.
Simplex enumerate_target(const GridSpec& spec, std::uint64_t cap = 1000000);

// Number of distinct increment sequences from the origin to x: the
// multinomial (sum x_d)! / prod x_d!, computed by lattice dynamic
// programming and cross-checked against the closed form. Throws
// std::overflow_error beyond 64-bit range.
std::uint64_t count_paths(const GridSpec& spec, const Coords& x);

// Cells attaining the maximum terminal reward (the 2^n corner modes for
// the default grid).
std::vector<Coords> argmax_reward_cells(const GridSpec& spec, std::uint64_t cap = 1000000);

// Row-major cell indexing helpers shared by the DP and the renderers.
std::uint64_t cell_count(const GridSpec& spec);
std::size_t cell_index(const GridSpec& spec, const Coords& x);
Coords cell_coords(const GridSpec& spec, std::size_t idx);

}  // namespace ipslab
