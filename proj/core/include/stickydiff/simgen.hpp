#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stickydiff/data_model.hpp"
#include "stickydiff/franchise.hpp"
#include "stickydiff/rng.hpp"

namespace stickydiff {

enum class DistanceSource { bundled, log_uniform, explicit_gaps };

// Configuration of the synthetic methylation generator.
struct SimConfig {
  int p = 500;
  int T = 5;
  int n_per_treatment = 4;
  double sigma2_0 = 0.36;  // true observation variance (low noise)
  double eta_0 = 0.004;    // true dependence parameter
  HyperParams hp_true;     // alpha1=alpha2=20, d2 set below, beta=20, gamma=0.9, rho1=0.9, mu_G=0, tau_G2=1

  double read_depth_mean = 50.0;
  double baseline_methylated = 0.8;
  double baseline_transit = 0.5;
  double baseline_demethylated = 0.2;
  double tau_chi2 = 0.1225;  // probe random-effect variance
  double hmm_kappa = 0.004;  // distance scale of the 4-state methylation HMM

  int truncation_L = 50;  // atoms in the truncated realization of G

  DistanceSource distance_source = DistanceSource::bundled;
  long long gap_min_bp = 4000;   // log-uniform fallback range
  long long gap_max_bp = 16000;
  std::vector<long long> gaps_bp;  // used when distance_source == explicit_gaps

  std::uint64_t seed = 1;
  std::string meta = "simulated";

  SimConfig() {
    hp_true.d2 = 0.33;
    hp_true.eta = eta_0;
  }

  void validate() const;  // throws validation_error
};

// Ground truth attached to a generated dataset.
struct SimTruth {
  std::vector<int> s_true;    // 1 = non-differential, 2 = differential
  Matrix theta_true;          // p x T treatment-probe effects
  std::vector<double> chi_true;
  std::vector<int> h_true;    // HMM methylation states in 1..4
  HyperParams hp_true;
};

// The bundled sample of inter-probe gaps (base pairs); also shipped as
// data/interprobe_gaps.tsv.
std::vector<long long> bundled_interprobe_gaps();

// 4-state distance-based methylation HMM: transition kernel
// P(e) = exp(-e/kappa) I + (1-exp(-e/kappa)) Q with Q the cycle
// methylated -> transit -> demethylated -> transit -> methylated.
// Distances must be normalized (sum to 1); the stationary law is uniform.
std::vector<int> generate_methylation_states(int p, std::span<const double> distances,
                                             double kappa, Rng& rng);

std::pair<Dataset, SimTruth> generate_dataset(const SimConfig& cfg, Rng& rng);

// Convenience overload seeding from cfg.seed.
std::pair<Dataset, SimTruth> generate_dataset(const SimConfig& cfg);

}  // namespace stickydiff
