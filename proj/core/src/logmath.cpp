#include "stickydiff/logmath.hpp"

#include <algorithm>
#include <cmath>

namespace stickydiff {

double log_sum_exp(std::span<const double> logs) {
  if (logs.empty()) return neg_inf;
  const double m = *std::max_element(logs.begin(), logs.end());
  if (m == neg_inf) return neg_inf;
  double s = 0.0;
  for (double v : logs) s += std::exp(v - m);
  return m + std::log(s);
}

double log_normalize(std::span<double> logs) {
  const double z = log_sum_exp(logs);
  for (double& v : logs) v -= z;
  return z;
}

double log_rising(double x, long m) {
  if (m <= 0) return 0.0;
  if (m < 8) {
    double s = 0.0;
    for (long i = 0; i < m; ++i) s += std::log(x + static_cast<double>(i));
    return s;
  }
  return std::lgamma(x + static_cast<double>(m)) - std::lgamma(x);
}

double log_pyp_eppf(std::span<const int> block_sizes, double alpha, double d) {
  const long k = static_cast<long>(block_sizes.size());
  if (k == 0) return 0.0;
  long n = 0;
  double lp = 0.0;
  for (int sz : block_sizes) {
    n += sz;
    lp += log_rising(1.0 - d, sz - 1);
  }
  for (long i = 1; i < k; ++i) lp += std::log(alpha + static_cast<double>(i) * d);
  lp -= log_rising(alpha + 1.0, n - 1);
  return lp;
}

double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double lag1_autocorr(std::span<const double> xs) {
  const size_t n = xs.size();
  if (n < 2) return 0.0;
  const double m = mean(xs);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    den += (xs[i] - m) * (xs[i] - m);
    if (i + 1 < n) num += (xs[i] - m) * (xs[i + 1] - m);
  }
  if (den == 0.0) return 0.0;
  return num / den;
}

}  // namespace stickydiff
