#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace stickydiff {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow; handles -inf operands.
inline double log_add(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  const double m = a > b ? a : b;
  return m + std::log1p(std::exp(-(std::fabs(a - b))));
}

// log(exp(a) - exp(b)) for a >= b; returns -inf when the difference
// underflows to zero.
inline double log_sub(double a, double b) {
  if (b == neg_inf) return a;
  const double d = b - a;  // <= 0
  if (d >= 0.0) return neg_inf;
  const double one_minus = -std::expm1(d);  // 1 - exp(b-a)
  if (one_minus <= 0.0) return neg_inf;
  return a + std::log(one_minus);
}

double log_sum_exp(std::span<const double> logs);

// Normalizes in place: logs[i] -> log prob; returns the log normalizer.
double log_normalize(std::span<double> logs);

// log N(x | mean, var)
inline double log_normal_pdf(double x, double mean, double var) {
  static constexpr double log_2pi = 1.8378770664093453;
  const double d = x - mean;
  return -0.5 * (log_2pi + std::log(var) + d * d / var);
}

// log of the rising factorial (x)_m = x (x+1) ... (x+m-1), m >= 0, x > 0.
double log_rising(double x, long m);

// Log exchangeable partition probability of a Pitman-Yor process with mass
// alpha > 0 and discount d in [0,1), for a partition with the given block
// sizes:   prod_{k=1}^{K-1}(alpha + k d) * prod_k (1-d)_{n_k - 1} / (alpha+1)_{n-1}
double log_pyp_eppf(std::span<const int> block_sizes, double alpha, double d);

// Predictive weight of joining an existing block of size m (counts exclude
// the incoming element): (m - d) / (total + alpha).
// Weight of a new block with M existing blocks: (alpha + M d) / (total + alpha).
inline double log_pyp_join(int m, int total, double alpha, double d) {
  return std::log(static_cast<double>(m) - d) - std::log(static_cast<double>(total) + alpha);
}
inline double log_pyp_new(int n_blocks, int total, double alpha, double d) {
  return std::log(alpha + static_cast<double>(n_blocks) * d) -
         std::log(static_cast<double>(total) + alpha);
}

double mean(std::span<const double> xs);
double variance(std::span<const double> xs);  // unbiased

// Lag-1 sample autocorrelation.
double lag1_autocorr(std::span<const double> xs);

}  // namespace stickydiff
