#include "ipslab/hypergrid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ipslab {

void validate(const GridSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("GridSpec: need n >= 1");
  if (spec.H < 2) throw std::invalid_argument("GridSpec: need H >= 2");
  if (!(0.0 < spec.R0 && spec.R0 < spec.R1 && spec.R1 < spec.R2))
    throw std::invalid_argument("GridSpec: rewards must satisfy 0 < R0 < R1 < R2");
}

namespace {

void check_coords(const GridSpec& spec, const Coords& x) {
  if (static_cast<int>(x.size()) != spec.n)
    throw std::invalid_argument("coords: dimension mismatch");
  for (int v : x)
    if (v < 0 || v >= spec.H)
      throw std::invalid_argument("coords: component " + std::to_string(v) +
                                  " outside [0, H-1]");
}

}  // namespace

std::vector<double> normalized_coord(const GridSpec& spec, const Coords& x) {
  check_coords(spec, x);
  std::vector<double> a(x.size());
  for (std::size_t d = 0; d < x.size(); ++d)
    a[d] = 2.0 * x[d] / (spec.H - 1) - 1.0;
  return a;
}

double terminal_reward(const GridSpec& spec, const Coords& x) {
  const auto a = normalized_coord(spec, x);
  bool ring = true, mode = true;
  for (double ad : a) {
    const double m = std::fabs(ad);
    ring = ring && (m > 0.5);
    mode = mode && (0.6 < m && m < 0.8);
  }
  return spec.R0 + (ring ? spec.R1 : 0.0) + (mode ? spec.R2 : 0.0);
}

std::vector<GridAction> valid_actions(const GridSpec& spec, const GridState& s) {
  if (s.terminated) throw std::logic_error("valid_actions: state already terminated");
  check_coords(spec, s.coords);
  std::vector<GridAction> acts;
  for (int d = 0; d < spec.n; ++d)
    if (s.coords[d] < spec.H - 1) acts.push_back(GridAction::increment(d));
  acts.push_back(GridAction::terminate());
  return acts;
}

StepResult step(const GridSpec& spec, const GridState& s, const GridAction& a) {
  if (s.terminated) throw std::logic_error("step: state already terminated");
  check_coords(spec, s.coords);
  StepResult res;
  if (a.is_terminate()) {
    res.next = s;
    res.next.terminated = true;
    res.has_reward = true;
    res.reward = terminal_reward(spec, s.coords);
    return res;
  }
  if (a.dim < 0 || a.dim >= spec.n)
    throw std::invalid_argument("step: increment dimension out of range");
  if (s.coords[a.dim] >= spec.H - 1)
    throw std::invalid_argument("step: increment past the grid boundary");
  res.next = s;
  res.next.coords[a.dim]++;
  return res;
}

std::uint64_t cell_count(const GridSpec& spec) {
  std::uint64_t c = 1;
  for (int d = 0; d < spec.n; ++d) c *= static_cast<std::uint64_t>(spec.H);
  return c;
}

std::size_t cell_index(const GridSpec& spec, const Coords& x) {
  check_coords(spec, x);
  std::size_t idx = 0;
  for (int d = 0; d < spec.n; ++d) idx = idx * spec.H + static_cast<std::size_t>(x[d]);
  return idx;
}

Coords cell_coords(const GridSpec& spec, std::size_t idx) {
  Coords x(spec.n);
  for (int d = spec.n - 1; d >= 0; --d) {
    x[d] = static_cast<int>(idx % spec.H);
    idx /= spec.H;
  }
  return x;
}

Simplex enumerate_target(const GridSpec& spec, std::uint64_t cap) {
  validate(spec);
  const std::uint64_t cells = cell_count(spec);
  if (cells > cap)
    throw std::runtime_error("enumerate_target: H^n exceeds the enumeration cap; "
                             "use a smaller grid");
  Simplex target(cells);
  double total = 0.0;
  for (std::uint64_t i = 0; i < cells; ++i) {
    target[i] = terminal_reward(spec, cell_coords(spec, i));
    total += target[i];
  }
  for (double& v : target) v /= total;
  return target;
}

std::uint64_t count_paths(const GridSpec& spec, const Coords& x) {
  check_coords(spec, x);
  // Lattice DP: paths(y) = sum over dimensions of paths(y - e_d).
  std::uint64_t total_cells = 1;
  for (int v : x) total_cells *= static_cast<std::uint64_t>(v) + 1;

  std::vector<std::uint64_t> dp(total_cells, 0);
  auto sub_index = [&](const std::vector<int>& y) {
    std::size_t idx = 0;
    for (std::size_t d = 0; d < y.size(); ++d)
      idx = idx * (static_cast<std::size_t>(x[d]) + 1) + static_cast<std::size_t>(y[d]);
    return idx;
  };

  dp[0] = 1;
  for (std::uint64_t i = 1; i < total_cells; ++i) {
    std::vector<int> y(x.size());
    std::uint64_t rem = i;
    for (int d = static_cast<int>(x.size()) - 1; d >= 0; --d) {
      y[d] = static_cast<int>(rem % (static_cast<std::uint64_t>(x[d]) + 1));
      rem /= static_cast<std::uint64_t>(x[d]) + 1;
    }
    std::uint64_t paths = 0;
    for (std::size_t d = 0; d < y.size(); ++d) {
      if (y[d] == 0) continue;
      y[d]--;
      const std::uint64_t prev = dp[sub_index(y)];
      y[d]++;
      if (paths > UINT64_MAX - prev)
        throw std::overflow_error("count_paths: path count exceeds 64-bit range");
      paths += prev;
    }
    dp[i] = paths;
  }
  return dp[total_cells - 1];
}

std::vector<Coords> argmax_reward_cells(const GridSpec& spec, std::uint64_t cap) {
  validate(spec);
  const std::uint64_t cells = cell_count(spec);
  if (cells > cap)
    throw std::runtime_error("argmax_reward_cells: H^n exceeds the enumeration cap");
  double best = -1.0;
  std::vector<Coords> out;
  for (std::uint64_t i = 0; i < cells; ++i) {
    const Coords x = cell_coords(spec, i);
    const double r = terminal_reward(spec, x);
    if (r > best + 1e-12) {
      best = r;
      out.clear();
      out.push_back(x);
    } else if (std::fabs(r - best) <= 1e-12) {
      out.push_back(x);
    }
  }
  return out;
}

}  // namespace ipslab
