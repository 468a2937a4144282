#pragma once

#include <vector>

#include "stickydiff/data_model.hpp"

namespace stickydiff {

struct PairwiseRecord {
  int probe = 0;        // probe index
  int t_high = 0;       // treatment with the larger posterior mean (1-based)
  int t_low = 0;
  double difference = 0.0;  // mean_high - mean_low, >= 0
};

struct FdrResult {
  std::vector<bool> called;
  int b_star = 0;
  std::vector<double> expected_fdr_path;  // FDRhat_b for b = 1..p
};

struct PosteriorSummary {
  std::vector<double> omega_hat;  // per-probe differential probabilities
  std::vector<bool> called;
  int b_star = 0;
  double q0 = 0.05;
  std::vector<double> expected_fdr_path;
  std::vector<PairwiseRecord> pairwise;  // one record per called probe
};

// omega_hat_j = fraction of stored samples with s_j == 2.
// `s_draws` holds one vector of states (1/2) per stored sample.
std::vector<double> estimate_diff_prob(const std::vector<std::vector<std::uint8_t>>& s_draws);

// Bayesian FDR calling: sort omega_hat descending (ties by probe index),
// FDRhat_b = sum_{j<=b}(1-omega_(j))/b, b* = largest b with FDRhat_b < q0.
FdrResult fdr_call(const std::vector<double>& omega_hat, double q0);

// For each called probe, the treatment pair with the largest absolute
// difference of posterior means (ties broken toward the lowest-index pair).
// theta_mean is p x T.
std::vector<PairwiseRecord> pairwise_differences(const Matrix& theta_mean,
                                                 const std::vector<bool>& called);

PosteriorSummary summarize_posterior(const std::vector<std::vector<std::uint8_t>>& s_draws,
                                     const Matrix& theta_mean, double q0);

}  // namespace stickydiff
