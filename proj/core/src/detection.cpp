#include "stickydiff/detection.hpp"

#include <algorithm>
#include <numeric>

#include "stickydiff/errors.hpp"

namespace stickydiff {

std::vector<double> estimate_diff_prob(const std::vector<std::vector<std::uint8_t>>& s_draws) {
  if (s_draws.empty()) throw validation_error("estimate_diff_prob: empty trace");
  const std::size_t p = s_draws.front().size();
  std::vector<double> omega(p, 0.0);
  for (const auto& draw : s_draws) {
    if (draw.size() != p) throw validation_error("estimate_diff_prob: ragged trace");
    for (std::size_t j = 0; j < p; ++j)
      if (draw[j] == 2) omega[j] += 1.0;
  }
  for (double& w : omega) w /= static_cast<double>(s_draws.size());
  return omega;
}

FdrResult fdr_call(const std::vector<double>& omega_hat, double q0) {
  const std::size_t p = omega_hat.size();
  for (double w : omega_hat)
    if (!(w >= 0.0 && w <= 1.0)) throw validation_error("fdr_call: omega values must lie in [0,1]");
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (omega_hat[a] != omega_hat[b]) return omega_hat[a] > omega_hat[b];
    return a < b;  // deterministic tie-break by probe index
  });

  FdrResult res;
  res.expected_fdr_path.resize(p);
  double cum = 0.0;
  int b_star = 0;
  for (std::size_t b = 0; b < p; ++b) {
    cum += 1.0 - omega_hat[order[b]];
    const double fdr_b = cum / static_cast<double>(b + 1);
    res.expected_fdr_path[b] = fdr_b;
    // largest qualifying b; the path need not be monotone
    if (fdr_b < q0) b_star = static_cast<int>(b + 1);
  }
  res.b_star = b_star;
  res.called.assign(p, false);
  for (int b = 0; b < b_star; ++b) res.called[order[static_cast<std::size_t>(b)]] = true;
  return res;
}

std::vector<PairwiseRecord> pairwise_differences(const Matrix& theta_mean,
                                                 const std::vector<bool>& called) {
  const std::size_t p = theta_mean.rows();
  const std::size_t T = theta_mean.cols();
  std::vector<PairwiseRecord> out;
  for (std::size_t j = 0; j < p; ++j) {
    if (!called[j]) continue;
    PairwiseRecord rec;
    rec.probe = static_cast<int>(j);
    rec.t_high = 1;
    rec.t_low = 2;
    rec.difference = -1.0;
    for (std::size_t a = 0; a < T; ++a)
      for (std::size_t b = a + 1; b < T; ++b) {
        const double diff = theta_mean(j, a) - theta_mean(j, b);
        const double mag = diff < 0.0 ? -diff : diff;
        if (mag > rec.difference) {
          rec.difference = mag;
          if (diff >= 0.0) {
            rec.t_high = static_cast<int>(a + 1);
            rec.t_low = static_cast<int>(b + 1);
          } else {
            rec.t_high = static_cast<int>(b + 1);
            rec.t_low = static_cast<int>(a + 1);
          }
        }
      }
    if (rec.difference == 0.0) {  // total tie: report the lowest-index pair
      rec.t_high = 1;
      rec.t_low = 2;
    }
    out.push_back(rec);
  }
  return out;
}

PosteriorSummary summarize_posterior(const std::vector<std::vector<std::uint8_t>>& s_draws,
                                     const Matrix& theta_mean, double q0) {
  PosteriorSummary ps;
  ps.q0 = q0;
  ps.omega_hat = estimate_diff_prob(s_draws);
  FdrResult fr = fdr_call(ps.omega_hat, q0);
  ps.called = std::move(fr.called);
  ps.b_star = fr.b_star;
  ps.expected_fdr_path = std::move(fr.expected_fdr_path);
  ps.pairwise = pairwise_differences(theta_mean, ps.called);
  return ps;
}

}  // namespace stickydiff
