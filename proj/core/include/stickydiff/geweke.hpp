#pragma once

#include <string>
#include <vector>

#include "stickydiff/mcmc.hpp"
#include "stickydiff/rng.hpp"

namespace stickydiff {

// Configuration of the joint-distribution (successive-conditional) test: the
// sampler is run against its own generative model with the data re-drawn
// every iteration, and moments of scalar functions are compared against
// plain forward simulation.
struct GewekeConfig {
  int p = 10;
  int T = 3;
  int n_per_treatment = 2;
  long forward_samples = 20000;
  long successive_samples = 20000;
  McmcConfig mcmc;  // model options, priors, truncation
  bool corrupt_sigma2 = false;
  std::uint64_t seed = 1;

  GewekeConfig() {
    mcmc.chi_model = ChiModel::iid_normal;
    mcmc.xi_model = XiModel::iid_normal;
    mcmc.truncation_L = 64;
  }
};

struct GewekeReport {
  std::vector<std::string> names;
  std::vector<double> forward_mean, successive_mean;
  std::vector<double> forward_se, successive_se;
  std::vector<double> z_scores;

  double max_abs_z() const;
  bool all_within(double bound) const;
};

GewekeReport joint_distribution_test(const GewekeConfig& cfg, Rng& rng);

}  // namespace stickydiff
