#include "ipslab/grid_env.hpp"

#include <stdexcept>
#include <string>

namespace ipslab {

std::size_t GridEnv::index(const Coords& x) const {
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("GridEnv::index: dimension mismatch");
  std::size_t idx = 0;
  for (int d = 0; d < n; ++d) {
    if (x[d] < 0 || x[d] >= H)
      throw std::invalid_argument("GridEnv::index: coordinate " +
                                  std::to_string(x[d]) + " outside [0, H-1]");
    idx = idx * H + static_cast<std::size_t>(x[d]);
  }
  return idx;
}

Coords GridEnv::coords(std::size_t idx) const {
  if (idx >= cell_count())
    throw std::invalid_argument("GridEnv::coords: cell index out of range");
  Coords x(n);
  for (int d = n - 1; d >= 0; --d) {
    x[d] = static_cast<int>(idx % H);
    idx /= H;
  }
  return x;
}

std::vector<int> GridEnv::valid_action_ids(std::size_t cell) const {
  if (cell >= cell_count())
    throw std::invalid_argument("GridEnv::valid_action_ids: cell index out of range");
  if (absorbing[cell]) return {terminate_action()};
  const Coords x = coords(cell);
  std::vector<int> acts;
  for (int d = 0; d < n; ++d)
    if (x[d] < H - 1) acts.push_back(d);
  acts.push_back(terminate_action());
  return acts;
}

std::size_t GridEnv::next_cell(std::size_t cell, int action) const {
  if (action < 0 || action >= n)
    throw std::invalid_argument("GridEnv::next_cell: not an increment action");
  const Coords x = coords(cell);
  if (x[action] >= H - 1)
    throw std::invalid_argument("GridEnv::next_cell: increment past the grid boundary");
  // Incrementing coordinate d adds H^(n-1-d) to the row-major index.
  std::size_t stride = 1;
  for (int d = n - 1; d > action; --d) stride *= static_cast<std::size_t>(H);
  return cell + stride;
}

GridEnv make_hypergrid_env(const GridSpec& spec) {
  validate(spec);
  GridEnv env;
  env.name = "hypergrid";
  env.n = spec.n;
  env.H = spec.H;
  const std::uint64_t cells = cell_count(spec);
  env.reward.resize(cells);
  env.absorbing.assign(cells, false);
  for (std::uint64_t i = 0; i < cells; ++i)
    env.reward[i] = terminal_reward(spec, cell_coords(spec, i));
  return env;
}

GridEnv make_equal_reward_env() {
  GridEnv env;
  env.name = "equal-reward";
  env.n = 2;
  env.H = 7;
  const std::size_t cells = 49;
  env.reward.assign(cells, 0.001);
  env.absorbing.assign(cells, false);
  const std::size_t a = env.index({4, 3});
  const std::size_t b = env.index({6, 1});
  env.reward[a] = 1.0;
  env.reward[b] = 1.0;
  env.absorbing[a] = true;
  env.absorbing[b] = true;
  return env;
}

}  // namespace ipslab
