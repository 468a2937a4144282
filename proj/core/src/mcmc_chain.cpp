#include <chrono>
#include <cmath>

#include "mcmc_internal.hpp"

namespace stickydiff {

McmcResult run_chain(const LogitData& data, const McmcConfig& cfg, Rng& rng) {
  cfg.validate();
  ChainState state = initialize(data, cfg);
  const int p = state.franchise.p;
  const int T = state.franchise.T;

  McmcResult result;
  result.theta_mean = Matrix(static_cast<std::size_t>(p), static_cast<std::size_t>(T));
  const long total_iters = static_cast<long>(cfg.burn_in) + cfg.samples;
  const long expected = cfg.samples / cfg.thin;
  result.samples.reserve(static_cast<std::size_t>(std::min<long>(expected, 200000)));

  const auto t0 = std::chrono::steady_clock::now();
  long stored = 0;
  for (long it = 0; it < total_iters; ++it) {
    const Block1Stats b1 = block1_update(state, data, rng);
    result.summary.block1_proposals += b1.proposals;
    result.summary.block1_accepts += b1.accepts;
    result.summary.block2_rejection_exhaustions += block2_update(state, data, cfg, rng);
    block3_update(state, data, cfg, rng);
    state.iteration = it + 1;

    const long k = it - cfg.burn_in + 1;  // 1-based post-burn-in index
    if (k >= 1 && k % cfg.thin == 0) {
      PosteriorSample smp;
      smp.iteration = state.iteration;
      smp.s = state.franchise.s;
      if (cfg.store_theta) {
        smp.theta.resize(static_cast<std::size_t>(p) * T);
        for (int j = 0; j < p; ++j) {
          const std::vector<double>& dish = state.franchise.theta(j);
          for (int t = 0; t < T; ++t) smp.theta[static_cast<std::size_t>(j) * T + t] = dish[static_cast<std::size_t>(t)];
        }
      }
      smp.sigma2 = state.hp.sigma2;
      smp.rho1 = state.hp.rho1;
      smp.gamma = state.hp.gamma;
      smp.eta = state.hp.eta;
      smp.d2 = state.hp.d2;
      smp.alpha1 = state.hp.alpha1;
      smp.alpha2 = state.hp.alpha2;
      smp.beta_mass = state.hp.beta_mass;
      smp.mu_G = state.hp.mu_G;
      smp.tau_G2 = state.hp.tau_G2;
      smp.tau_eps2 = state.hp.tau_eps2;
      smp.loglik = data_loglik(state, data);
      smp.eta_zero = state.hp.eta == 0.0;
      smp.log_odds_eta = eta_conditional_log_odds(state.franchise, data.distances, state.hp.rho1,
                                                  state.hp.gamma, cfg.eta_quadrature_points);
      smp.q_clusters = static_cast<int>(extract_clusters(state.franchise).size());
      smp.occupied_tables = state.franchise.total_tables();
      int n_diff = 0;
      for (std::uint8_t s : state.franchise.s)
        if (s == 2) ++n_diff;
      smp.n_diff = n_diff;

      for (int j = 0; j < p; ++j) {
        const std::vector<double>& dish = state.franchise.theta(j);
        for (int t = 0; t < T; ++t)
          result.theta_mean(static_cast<std::size_t>(j), static_cast<std::size_t>(t)) += dish[static_cast<std::size_t>(t)];
      }
      result.s_draws.push_back(smp.s);
      result.log_odds_eta_trace.push_back(smp.log_odds_eta);
      result.samples.push_back(std::move(smp));
      ++stored;
    }
  }
  const auto t1 = std::chrono::steady_clock::now();

  if (stored > 0)
    for (double& v : result.theta_mean.data()) v /= static_cast<double>(stored);
  result.summary.block1_accept_rate =
      result.summary.block1_proposals > 0
          ? static_cast<double>(result.summary.block1_accepts) / static_cast<double>(result.summary.block1_proposals)
          : 0.0;
  result.summary.seconds_per_iteration =
      std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(total_iters);
  return result;
}

McmcResult run_chain(const LogitData& data, const McmcConfig& cfg) {
  Rng rng(cfg.seed);
  return run_chain(data, cfg, rng);
}

}  // namespace stickydiff
