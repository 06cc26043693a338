#include "ipslab/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace ipslab {

bool ModeSet::contains(std::size_t cell) const {
  return std::find(cells.begin(), cells.end(), cell) != cells.end();
}

ModeSet make_mode_set(const GridEnv& env) {
  if (env.reward.empty()) throw std::invalid_argument("make_mode_set: empty grid");
  const double best = *std::max_element(env.reward.begin(), env.reward.end());
  ModeSet set;
  for (std::size_t cell = 0; cell < env.cell_count(); ++cell) {
    if (env.reward[cell] >= best - 1e-12) {
      set.cells.push_back(cell);
      set.modes.push_back(env.coords(cell));
    }
  }
  return set;
}

std::vector<std::pair<std::size_t, int>> mode_recovery_curve(
    const std::vector<std::size_t>& outcome_stream, const ModeSet& modes) {
  std::vector<std::pair<std::size_t, int>> curve;
  curve.reserve(outcome_stream.size());
  std::vector<bool> seen(modes.cells.size(), false);
  int recovered = 0;
  for (std::size_t i = 0; i < outcome_stream.size(); ++i) {
    for (std::size_t m = 0; m < modes.cells.size(); ++m) {
      if (!seen[m] && outcome_stream[i] == modes.cells[m]) {
        seen[m] = true;
        recovered++;
      }
    }
    curve.emplace_back(i + 1, recovered);
  }
  return curve;
}

std::vector<std::vector<double>> mode_frequency_trace(const RunLog& log,
                                                      const ModeSet& modes) {
  if (log.records.empty())
    throw std::invalid_argument("mode_frequency_trace: empty run log");
  std::vector<std::vector<double>> trace;
  trace.reserve(log.records.size());
  for (const UpdateRecord& rec : log.records) {
    if (rec.outcomes.empty())
      throw std::invalid_argument("mode_frequency_trace: update record has no outcomes");
    std::vector<double> freq(modes.cells.size(), 0.0);
    for (std::size_t o : rec.outcomes)
      for (std::size_t m = 0; m < modes.cells.size(); ++m)
        if (o == modes.cells[m]) freq[m] += 1.0;
    for (double& f : freq) f /= static_cast<double>(rec.outcomes.size());
    trace.push_back(std::move(freq));
  }
  return trace;
}

int modes_recovered(const RunLog& log) {
  std::vector<char> seen(log.tracked_modes.size(), 0);
  for (const UpdateRecord& rec : log.records)
    for (std::size_t m = 0; m < rec.mode_counts.size() && m < seen.size(); ++m)
      if (rec.mode_counts[m] > 0) seen[m] = 1;
  int total = 0;
  for (char c : seen) total += c;
  return total;
}

std::vector<std::vector<double>> force_field(const GridEnv& env,
                                             const TabularPolicy& policy) {
  std::vector<std::vector<double>> field(env.cell_count(), std::vector<double>(env.n, 0.0));
  for (std::size_t cell = 0; cell < env.cell_count(); ++cell) {
    const std::vector<double> dist = action_distribution(env, policy, cell);
    for (int d = 0; d < env.n; ++d) field[cell][d] = dist[d];
  }
  return field;
}

Simplex sampling_density(const std::vector<std::size_t>& samples, std::size_t cell_count) {
  if (samples.empty())
    throw std::invalid_argument("sampling_density: empty sample list");
  Simplex density(cell_count, 0.0);
  const double w = 1.0 / static_cast<double>(samples.size());
  for (std::size_t s : samples) {
    if (s >= cell_count)
      throw std::invalid_argument("sampling_density: sample cell out of range");
    density[s] += w;
  }
  return density;
}

}  // namespace ipslab
