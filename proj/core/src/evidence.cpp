#include "stickydiff/evidence.hpp"

#include <cmath>
#include <vector>

#include "stickydiff/errors.hpp"
#include "stickydiff/logmath.hpp"

namespace stickydiff {

BfBound bf_lower_bound(std::span<const double> log_odds_trace, BfDirection direction) {
  const std::size_t n = log_odds_trace.size();
  if (n == 0) throw validation_error("bf_lower_bound: empty trace");
  const double sign = direction == BfDirection::order1_vs_order0 ? 1.0 : -1.0;

  double m = 0.0;
  for (double v : log_odds_trace) m += sign * v;
  m /= static_cast<double>(n);

  BfBound out;
  out.estimate = m;
  if (n < 4) {
    out.mc_se = 0.0;
    return out;
  }
  // batch means
  const std::size_t n_batches = std::min<std::size_t>(30, n / 2);
  const std::size_t batch = n / n_batches;
  std::vector<double> means;
  means.reserve(n_batches);
  for (std::size_t b = 0; b < n_batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * batch; i < (b + 1) * batch; ++i) s += sign * log_odds_trace[i];
    means.push_back(s / static_cast<double>(batch));
  }
  out.mc_se = std::sqrt(variance(means) / static_cast<double>(n_batches));
  return out;
}

}  // namespace stickydiff
