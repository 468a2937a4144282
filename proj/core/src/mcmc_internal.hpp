#pragma once

#include <span>
#include <vector>

#include "stickydiff/data_model.hpp"
#include "stickydiff/mcmc.hpp"

namespace stickydiff::detail {

// Residual sufficient statistics per (probe, treatment) for the current
// (xi, chi): A = sum residuals, B = sum of squared residuals, where
// residual_ij = z_ij - xi_i - chi_j.
struct Workspace {
  int p = 0, T = 0, n = 0;
  std::vector<int> n_t;
  std::vector<std::vector<int>> members;  // sample indices per treatment
  std::vector<double> A, B;               // size p*T

  void build(const LogitData& data, std::span<const double> xi, std::span<const double> chi);

  double a(int j, int t) const { return A[static_cast<std::size_t>(j) * T + t]; }
  double b(int j, int t) const { return B[static_cast<std::size_t>(j) * T + t]; }

  // sum_{i in treatment t} log N(z_ij | u + xi_i + chi_j, sigma2)
  double loglik_atom(int j, int t, double u, double sigma2) const;
  double loglik_dish(int j, std::span<const double> dish, double sigma2) const;
};

// Distinct latent element values with their draw multiplicities (one draw
// per table for cuisine-1 dishes, one per (table, treatment) for cuisine-2).
struct ElementDraws {
  std::vector<double> values;
  std::vector<int> counts;
  int total = 0;

  void add(double value, int count);
};

ElementDraws collect_element_draws(const FranchiseState& fs);

// log W*_s(dish) under the truncated G*: menu probability of a dish.
double log_menu_prob(const BaseMeasureG& g, int cuisine, std::span<const double> dish,
                     double log_w2_norm);

// log(1 - sum_l pi_l^T), the W_2 normalizer for the current G*.
double log_w2_normalizer(const BaseMeasureG& g, int T);

}  // namespace stickydiff::detail
