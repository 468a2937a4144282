#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stickydiff/data_model.hpp"
#include "stickydiff/franchise.hpp"
#include "stickydiff/rng.hpp"

namespace stickydiff {

enum class ChiModel { none, iid_normal, finite_mixture_3 };
enum class XiModel { iid_normal, dp_normal };

struct PriorConfig {
  // inverse-gamma (shape, rate)
  double sigma2_shape = 2.0, sigma2_rate = 1.0;
  double tau_eps2_shape = 2.0, tau_eps2_rate = 1.0;
  // gamma priors for the mass parameters alpha1, alpha2, beta
  double mass_shape = 2.0, mass_rate = 0.1;
  // normal-inverse-gamma for (mu_G, tau_G2)
  double nig_mu0 = 0.0, nig_kappa = 0.01, nig_shape = 2.0, nig_rate = 1.0;
  // 3-component chi mixture: component-mean prior N(0, var), shared variance IG
  double chi_mean_prior_var = 4.0;
  double chi_var_shape = 2.0, chi_var_rate = 0.2;
  double xi_dp_mass = 1.0;
};

struct McmcConfig {
  int burn_in = 10000;
  int samples = 50000;
  int thin = 1;
  int truncation_L = 50;
  std::uint64_t seed = 1;

  bool include_chi = true;
  ChiModel chi_model = ChiModel::finite_mixture_3;
  XiModel xi_model = XiModel::iid_normal;
  PriorConfig priors;

  double clamp_eps = 1e-6;
  bool store_theta = true;

  // random-walk scales for the MH moves on transformed parameters
  double rw_rho = 0.4, rw_gamma = 0.4, rw_eta_frac = 0.15, rw_d2 = 0.3, rw_logmass = 0.4;

  int eta_quadrature_points = 256;

  void validate() const;
};

// 3-component finite mixture over the probe effects chi.
struct ChiMixtureState {
  std::array<double, 3> means{1.386294, 0.0, -1.386294};
  std::array<double, 3> weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  double var = 0.2;
  std::vector<int> assign;  // per probe, 0..2
};

// Dirichlet-process state for the subject effects xi.
struct XiDpState {
  std::vector<int> assign;    // cluster per subject
  std::vector<double> atoms;  // one value per cluster
};

// Complete MCMC state.
struct ChainState {
  FranchiseState franchise;
  std::vector<double> xi;   // n subject effects
  std::vector<double> chi;  // p probe effects (zeros when ChiModel::none)
  HyperParams hp;
  BaseMeasureG g_star;  // current truncated realization used by Block 1
  double tau_chi2 = 0.2;
  ChiMixtureState chi_mix;
  XiDpState xi_dp;
  long iteration = 0;

  // Latent-element invariant: every distinct dish element appears among the
  // atoms of g_star (dishes are menus draws over the truncated realization).
  void check_atom_invariant() const;
};

struct PosteriorSample {
  long iteration = 0;
  std::vector<std::uint8_t> s;  // per-probe differential state (1/2)
  std::vector<double> theta;    // p x T row-major (empty if not stored)
  double sigma2 = 0, rho1 = 0, gamma = 0, eta = 0, d2 = 0;
  double alpha1 = 0, alpha2 = 0, beta_mass = 0, mu_G = 0, tau_G2 = 0, tau_eps2 = 0;
  double loglik = 0;
  bool eta_zero = true;
  double log_odds_eta = 0;  // log P(eta>0 | X, rest) - log P(eta=0 | X, rest)
  int q_clusters = 0;
  int occupied_tables = 0;
  int n_diff = 0;
};

struct TraceSummary {
  long block1_proposals = 0;
  long block1_accepts = 0;
  long block2_rejection_exhaustions = 0;
  double block1_accept_rate = 0.0;
  double seconds_per_iteration = 0.0;
};

struct McmcResult {
  std::vector<PosteriorSample> samples;
  TraceSummary summary;
  Matrix theta_mean;  // p x T posterior mean of treatment-probe effects
  std::vector<std::vector<std::uint8_t>> s_draws;
  std::vector<double> log_odds_eta_trace;
};

// Deterministic initialization from per-probe ANOVA and single-linkage
// grouping of the probe effects.
ChainState initialize(const LogitData& data, const McmcConfig& cfg);

struct Block1Stats {
  long proposals = 0;
  long accepts = 0;
};

// One sweep of the joint Metropolis-Hastings update of (g_j, s_j, v_j,
// theta_j) for j = 1..p (Supplementary Block 1). The ranged overload updates
// probes [probe_begin, probe_end) only.
Block1Stats block1_update(ChainState& state, const LogitData& data, Rng& rng);
Block1Stats block1_update(ChainState& state, const LogitData& data, Rng& rng,
                          int probe_begin, int probe_end);

// Gibbs update of the latent vector elements given the probe-cluster
// allocations (Supplementary Block 2). Returns the number of rejection-cap
// exhaustions (restricted supports).
long block2_update(ChainState& state, const LogitData& data, const McmcConfig& cfg, Rng& rng);

// Remaining model parameters: sigma2, xi, chi, rho1, gamma, eta, d2, masses,
// (mu_G, tau_G2), and the G* refresh. When `corrupt_sigma2` is set the
// sigma2 full conditional uses half the correct rate (negative control for
// the joint-distribution test).
void block3_update(ChainState& state, const LogitData& data, const McmcConfig& cfg, Rng& rng,
                   bool corrupt_sigma2 = false);

McmcResult run_chain(const LogitData& data, const McmcConfig& cfg, Rng& rng);
McmcResult run_chain(const LogitData& data, const McmcConfig& cfg);  // seeds from cfg.seed

// Unnormalized log posterior density of the franchise configuration given
// the remaining state (the Block-1 target; also the enumeration-oracle
// kernel): likelihood + restaurant/cuisine chain + PYP partition terms +
// menu probabilities of the table dishes under the current G*.
double block1_log_target(const ChainState& state, const LogitData& data);

// Observation log likelihood of the full data given the current state.
double data_loglik(const ChainState& state, const LogitData& data);

// Restaurant-transition log likelihood sum_{j>=2} log F_j(g_j | s_{j-1})
// as a function of eta (used by the eta moves and the evidence quadrature);
// -inf when some affinity violates r/gamma < 1.
double loglik_restaurant_transitions(const FranchiseState& fs, std::span<const double> distances,
                                     double rho1, double gamma, double eta);

// log rho_{g_1} + sum_j log Q_{g_j}(s_j).
double loglik_first_and_cuisines(const FranchiseState& fs, double rho1, double gamma);

// Conditional log odds log P(eta>0 | ...) - log P(eta=0 | ...) by midpoint
// quadrature of the slab against the restaurant-transition likelihood.
double eta_conditional_log_odds(const FranchiseState& fs, std::span<const double> distances,
                                double rho1, double gamma, int n_points);

// Builds an initial G* realization hosting the current latent elements
// (atom-weight decomposition of the DP posterior plus a stick-breaking
// tail). Used at chain initialization; afterwards G* is a persistent
// parameter updated by blocked Gibbs inside Block 3.
void refresh_g_star(ChainState& state, int truncation_L, Rng& rng);

}  // namespace stickydiff
