#include "ipslab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ipslab {

Simplex softmax(const Logits& z) {
  if (z.size() < 2) throw std::invalid_argument("softmax: need K >= 2 logits");
  for (double v : z)
    if (!std::isfinite(v)) throw std::invalid_argument("softmax: non-finite logit");
  const double mx = *std::max_element(z.begin(), z.end());
  Simplex p(z.size());
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = std::exp(z[i] - mx);
    s += p[i];
  }
  for (double& v : p) v /= s;
  return p;
}

AdvantageVector advantage(const Simplex& p, const RewardVector& r) {
  if (p.size() != r.size()) throw std::invalid_argument("advantage: dimension mismatch");
  double mean = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) mean += p[i] * r[i];
  AdvantageVector a(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) a[i] = r[i] - mean;
  return a;
}

double l1_distance(const Simplex& p, const Simplex& q) {
  if (p.size() != q.size()) throw std::invalid_argument("l1_distance: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::fabs(p[i] - q[i]);
  return d;
}

double log_ratio(const Simplex& p, std::size_t i, std::size_t j) {
  if (i >= p.size() || j >= p.size()) throw std::invalid_argument("log_ratio: index out of range");
  if (p[i] <= 1e-300)
    throw std::domain_error("log_ratio: probability vanished at index " + std::to_string(i));
  if (p[j] <= 1e-300)
    throw std::domain_error("log_ratio: probability vanished at index " + std::to_string(j));
  return std::log(p[i] / p[j]);
}

bool is_simplex(const Simplex& p) {
  double s = 0.0;
  for (double v : p) {
    if (v < 0.0 || !std::isfinite(v)) return false;
    s += v;
  }
  return std::fabs(s - 1.0) <= 1e-9;
}

}  // namespace ipslab
