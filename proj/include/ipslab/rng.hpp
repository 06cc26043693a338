#pragma once

#include <cstddef>
#include <random>
#include <vector>

namespace ipslab {

// Uniform double in [0, 1) built from the top 53 bits of the generator,
// identical across platforms for a given seed.
inline double u01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Samples an index from a discrete distribution by walking the CDF. The
// final index absorbs any rounding slack so the walk always lands.
inline std::size_t sample_index(const std::vector<double>& p, std::mt19937_64& g) {
  const double u = u01(g);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  return p.size() - 1;
}

}  // namespace ipslab
