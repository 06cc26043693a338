#pragma once

#include <cstddef>
#include <vector>

namespace ipslab {

// Unconstrained parameter vector z with p = softmax(z).
using Logits = std::vector<double>;

// Probability vector: entries nonnegative, summing to 1 within 1e-9.
using Simplex = std::vector<double>;

// Per-outcome terminal rewards, in task units.
using RewardVector = std::vector<double>;

// Centered rewards a_i = r_i - sum_k p_k r_k; mean under p is 0.
using AdvantageVector = std::vector<double>;

// p_i = exp(z_i) / sum_k exp(z_k), computed with max-subtraction.
// Throws std::invalid_argument on non-finite input or K < 2.
Simplex softmax(const Logits& z);

// a_i = r_i - sum_k p_k r_k.
// Throws std::invalid_argument on dimension mismatch.
AdvantageVector advantage(const Simplex& p, const RewardVector& r);

// sum_i |p_i - q_i|, in [0, 2].
// Throws std::invalid_argument on dimension mismatch.
double l1_distance(const Simplex& p, const Simplex& q);

// log(p_i / p_j). Probabilities at or below 1e-300 are treated as zero
// and rejected with std::domain_error naming the vanished index.
double log_ratio(const Simplex& p, std::size_t i, std::size_t j);

// True when every entry is nonnegative and entries sum to 1 within 1e-9.
bool is_simplex(const Simplex& p);

}  // namespace ipslab
