#include <algorithm>
#include <cmath>
#include <vector>

#include "mcmc_internal.hpp"
#include "stickydiff/logmath.hpp"

namespace stickydiff {

namespace {

double min_distance(std::span<const double> distances) {
  double e = std::numeric_limits<double>::infinity();
  for (double d : distances) e = std::min(e, d);
  return e;
}

// Upper end of the eta values that keep every affinity ratio r/gamma below 1.
double eta_feasible_max(std::span<const double> distances, double gamma) {
  const double w = -1.0 / std::log(gamma);
  if (distances.empty()) return w;
  return std::min(w, min_distance(distances) / (-std::log(gamma)));
}

double logit_scalar(double x) { return std::log(x / (1.0 - x)); }
double sigmoid(double x) { return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

struct GsLik {
  const FranchiseState& fs;
  std::span<const double> distances;
  double operator()(double rho1, double gamma, double eta) const {
    const double a = loglik_restaurant_transitions(fs, distances, rho1, gamma, eta);
    if (a == neg_inf) return neg_inf;
    return a + loglik_first_and_cuisines(fs, rho1, gamma);
  }
};

void update_sigma2(ChainState& state, const LogitData& data, const PriorConfig& pr, Rng& rng,
                   bool corrupt) {
  const int n = static_cast<int>(data.z.rows());
  const int p = static_cast<int>(data.z.cols());
  double ssr = 0.0;
  for (int i = 0; i < n; ++i) {
    const int t = data.treatments[static_cast<std::size_t>(i)] - 1;
    for (int j = 0; j < p; ++j) {
      const double r = data.z(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) -
                       state.xi[static_cast<std::size_t>(i)] - state.chi[static_cast<std::size_t>(j)] -
                       state.franchise.theta(j)[static_cast<std::size_t>(t)];
      ssr += r * r;
    }
  }
  const double shape = pr.sigma2_shape + 0.5 * static_cast<double>(n) * static_cast<double>(p);
  double rate = pr.sigma2_rate + 0.5 * ssr;
  if (corrupt) rate *= 0.5;
  state.hp.sigma2 = rng.inverse_gamma(shape, rate);
}

void update_xi(ChainState& state, const LogitData& data, const McmcConfig& cfg, Rng& rng) {
  const int n = static_cast<int>(data.z.rows());
  const int p = static_cast<int>(data.z.cols());
  const double sigma2 = state.hp.sigma2;
  const PriorConfig& pr = cfg.priors;

  // per-subject residual sums against the current chi and theta
  std::vector<double> s_i(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const int t = data.treatments[static_cast<std::size_t>(i)] - 1;
    double s = 0.0;
    for (int j = 0; j < p; ++j)
      s += data.z(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) -
           state.chi[static_cast<std::size_t>(j)] - state.franchise.theta(j)[static_cast<std::size_t>(t)];
    s_i[static_cast<std::size_t>(i)] = s;
  }
  const double pd = static_cast<double>(p);

  if (cfg.xi_model == XiModel::iid_normal) {
    for (int i = 0; i < n; ++i) {
      const double prec = 1.0 / state.hp.tau_eps2 + pd / sigma2;
      const double mean = (s_i[static_cast<std::size_t>(i)] / sigma2) / prec;
      state.xi[static_cast<std::size_t>(i)] = rng.normal(mean, std::sqrt(1.0 / prec));
    }
    double ss = 0.0;
    for (double x : state.xi) ss += x * x;
    state.hp.tau_eps2 = rng.inverse_gamma(pr.tau_eps2_shape + 0.5 * static_cast<double>(n),
                                          pr.tau_eps2_rate + 0.5 * ss);
    return;
  }

  // DP over the subject effects with base N(0, tau_eps2)
  XiDpState& dp = state.xi_dp;
  if (dp.assign.size() != static_cast<std::size_t>(n)) {
    dp.assign.assign(static_cast<std::size_t>(n), 0);
    dp.atoms.assign(1, 0.0);
  }
  std::vector<int> counts(dp.atoms.size(), 0);
  for (int c : dp.assign) ++counts[static_cast<std::size_t>(c)];

  const double obs_var = sigma2 / pd;  // variance of the subject mean residual
  std::vector<double> logw;
  for (int i = 0; i < n; ++i) {
    const int c_old = dp.assign[static_cast<std::size_t>(i)];
    if (--counts[static_cast<std::size_t>(c_old)] == 0) {
      counts.erase(counts.begin() + c_old);
      dp.atoms.erase(dp.atoms.begin() + c_old);
      for (int& c : dp.assign)
        if (c > c_old) --c;
    }
    const double obs_mean = s_i[static_cast<std::size_t>(i)] / pd;
    logw.assign(counts.size() + 1, 0.0);
    for (std::size_t c = 0; c < counts.size(); ++c)
      logw[c] = std::log(static_cast<double>(counts[c])) +
                log_normal_pdf(obs_mean, dp.atoms[c], obs_var);
    logw[counts.size()] = std::log(pr.xi_dp_mass) +
                          log_normal_pdf(obs_mean, 0.0, state.hp.tau_eps2 + obs_var);
    const std::size_t pick = rng.categorical_log(logw);
    if (pick == counts.size()) {
      const double prec = 1.0 / state.hp.tau_eps2 + 1.0 / obs_var;
      const double mean = (obs_mean / obs_var) / prec;
      dp.atoms.push_back(rng.normal(mean, std::sqrt(1.0 / prec)));
      counts.push_back(1);
      dp.assign[static_cast<std::size_t>(i)] = static_cast<int>(counts.size() - 1);
    } else {
      ++counts[pick];
      dp.assign[static_cast<std::size_t>(i)] = static_cast<int>(pick);
    }
  }
  // refresh atoms given their members
  for (std::size_t c = 0; c < dp.atoms.size(); ++c) {
    double prec = 1.0 / state.hp.tau_eps2;
    double mean_num = 0.0;
    for (int i = 0; i < n; ++i) {
      if (dp.assign[static_cast<std::size_t>(i)] != static_cast<int>(c)) continue;
      prec += pd / sigma2;
      mean_num += s_i[static_cast<std::size_t>(i)] / sigma2;
    }
    dp.atoms[c] = rng.normal(mean_num / prec, std::sqrt(1.0 / prec));
  }
  for (int i = 0; i < n; ++i)
    state.xi[static_cast<std::size_t>(i)] = dp.atoms[static_cast<std::size_t>(dp.assign[static_cast<std::size_t>(i)])];
  double ss = 0.0;
  for (double a : dp.atoms) ss += a * a;
  state.hp.tau_eps2 = rng.inverse_gamma(pr.tau_eps2_shape + 0.5 * static_cast<double>(dp.atoms.size()),
                                        pr.tau_eps2_rate + 0.5 * ss);
}

void update_chi(ChainState& state, const LogitData& data, const McmcConfig& cfg, Rng& rng) {
  const ChiModel model = cfg.include_chi ? cfg.chi_model : ChiModel::none;
  if (model == ChiModel::none) {
    std::fill(state.chi.begin(), state.chi.end(), 0.0);
    return;
  }
  const int n = static_cast<int>(data.z.rows());
  const int p = static_cast<int>(data.z.cols());
  const double sigma2 = state.hp.sigma2;
  const double nd = static_cast<double>(n);
  const PriorConfig& pr = cfg.priors;

  std::vector<double> s_j(static_cast<std::size_t>(p), 0.0);
  for (int i = 0; i < n; ++i) {
    const int t = data.treatments[static_cast<std::size_t>(i)] - 1;
    for (int j = 0; j < p; ++j)
      s_j[static_cast<std::size_t>(j)] += data.z(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) -
                                          state.xi[static_cast<std::size_t>(i)] -
                                          state.franchise.theta(j)[static_cast<std::size_t>(t)];
  }

  if (model == ChiModel::iid_normal) {
    for (int j = 0; j < p; ++j) {
      const double prec = 1.0 / state.tau_chi2 + nd / sigma2;
      const double mean = (s_j[static_cast<std::size_t>(j)] / sigma2) / prec;
      state.chi[static_cast<std::size_t>(j)] = rng.normal(mean, std::sqrt(1.0 / prec));
    }
    double ss = 0.0;
    for (double x : state.chi) ss += x * x;
    state.tau_chi2 = rng.inverse_gamma(pr.chi_var_shape + 0.5 * static_cast<double>(p),
                                       pr.chi_var_rate + 0.5 * ss);
    return;
  }

  // 3-state finite mixture
  ChiMixtureState& mix = state.chi_mix;
  if (mix.assign.size() != static_cast<std::size_t>(p)) mix.assign.assign(static_cast<std::size_t>(p), 1);
  std::array<double, 3> logw;
  for (int j = 0; j < p; ++j) {
    for (int c = 0; c < 3; ++c)
      logw[static_cast<std::size_t>(c)] = std::log(mix.weights[static_cast<std::size_t>(c)]) +
                                          log_normal_pdf(state.chi[static_cast<std::size_t>(j)],
                                                         mix.means[static_cast<std::size_t>(c)], mix.var);
    mix.assign[static_cast<std::size_t>(j)] = static_cast<int>(rng.categorical_log(logw));
  }
  for (int j = 0; j < p; ++j) {
    const double m0 = mix.means[static_cast<std::size_t>(mix.assign[static_cast<std::size_t>(j)])];
    const double prec = 1.0 / mix.var + nd / sigma2;
    const double mean = (m0 / mix.var + s_j[static_cast<std::size_t>(j)] / sigma2) / prec;
    state.chi[static_cast<std::size_t>(j)] = rng.normal(mean, std::sqrt(1.0 / prec));
  }
  std::array<int, 3> counts{0, 0, 0};
  std::array<double, 3> sums{0.0, 0.0, 0.0};
  for (int j = 0; j < p; ++j) {
    const int c = mix.assign[static_cast<std::size_t>(j)];
    ++counts[static_cast<std::size_t>(c)];
    sums[static_cast<std::size_t>(c)] += state.chi[static_cast<std::size_t>(j)];
  }
  double ss = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double prec = 1.0 / pr.chi_mean_prior_var + static_cast<double>(counts[static_cast<std::size_t>(c)]) / mix.var;
    const double mean = (sums[static_cast<std::size_t>(c)] / mix.var) / prec;
    mix.means[static_cast<std::size_t>(c)] = rng.normal(mean, std::sqrt(1.0 / prec));
  }
  for (int j = 0; j < p; ++j) {
    const double d = state.chi[static_cast<std::size_t>(j)] -
                     mix.means[static_cast<std::size_t>(mix.assign[static_cast<std::size_t>(j)])];
    ss += d * d;
  }
  mix.var = rng.inverse_gamma(pr.chi_var_shape + 0.5 * static_cast<double>(p),
                              pr.chi_var_rate + 0.5 * ss);
  std::array<double, 3> dir;
  double dir_total = 0.0;
  for (int c = 0; c < 3; ++c) {
    dir[static_cast<std::size_t>(c)] = rng.gamma(1.0 + static_cast<double>(counts[static_cast<std::size_t>(c)]), 1.0);
    dir_total += dir[static_cast<std::size_t>(c)];
  }
  for (int c = 0; c < 3; ++c) mix.weights[static_cast<std::size_t>(c)] = dir[static_cast<std::size_t>(c)] / dir_total;
}

void update_rho_gamma(ChainState& state, const LogitData& data, const McmcConfig& cfg, Rng& rng) {
  const GsLik lik{state.franchise, data.distances};
  HyperParams& hp = state.hp;

  {  // rho1 on logit((rho1-0.5)*2)
    const double x = logit_scalar((hp.rho1 - 0.5) * 2.0);
    const double x_new = x + cfg.rw_rho * rng.normal();
    const double rho_new = 0.5 + 0.5 * sigmoid(x_new);
    const double log_jac = std::log(sigmoid(x_new)) + std::log(1.0 - sigmoid(x_new)) -
                           std::log(sigmoid(x)) - std::log(1.0 - sigmoid(x));
    const double log_a = lik(rho_new, hp.gamma, hp.eta) - lik(hp.rho1, hp.gamma, hp.eta) + log_jac;
    if (std::log(rng.uniform()) < log_a) hp.rho1 = rho_new;
  }

  {  // gamma on logit(gamma); the eta slab width depends on gamma
    const double x = logit_scalar(hp.gamma);
    const double x_new = x + cfg.rw_gamma * rng.normal();
    const double gamma_new = sigmoid(x_new);
    double log_a = lik(hp.rho1, gamma_new, hp.eta) - lik(hp.rho1, hp.gamma, hp.eta);
    log_a += std::log(sigmoid(x_new)) + std::log(1.0 - sigmoid(x_new)) -
             std::log(sigmoid(x)) - std::log(1.0 - sigmoid(x));
    if (hp.eta > 0.0) {
      if (hp.eta >= -1.0 / std::log(gamma_new)) {
        log_a = neg_inf;  // prior support violated
      } else {
        log_a += std::log(-std::log(gamma_new)) - std::log(-std::log(hp.gamma));
      }
    }
    if (std::log(rng.uniform()) < log_a) hp.gamma = gamma_new;
  }
}

void update_eta(ChainState& state, const LogitData& data, const McmcConfig& cfg, Rng& rng) {
  HyperParams& hp = state.hp;
  const FranchiseState& fs = state.franchise;
  const double slab_w = hp.eta_slab_width();
  const double eta_max = eta_feasible_max(data.distances, hp.gamma);
  const auto lik = [&](double eta) {
    return loglik_restaurant_transitions(fs, data.distances, hp.rho1, hp.gamma, eta);
  };

  if (hp.eta == 0.0) {
    if (rng.uniform() < 0.5) {  // birth into the slab (proposal restricted to feasible values)
      const double eta_new = rng.uniform(0.0, eta_max);
      const double log_a = lik(eta_new) - lik(0.0) + std::log(eta_max / slab_w);
      if (std::log(rng.uniform()) < log_a) hp.eta = eta_new;
    }
    return;
  }
  if (rng.uniform() < 0.5) {  // death to the spike
    const double log_a = lik(0.0) - lik(hp.eta) + std::log(slab_w / eta_max);
    if (std::log(rng.uniform()) < log_a) hp.eta = 0.0;
  } else {  // random walk within the slab
    const double eta_new = hp.eta + cfg.rw_eta_frac * eta_max * rng.normal();
    if (eta_new <= 0.0 || eta_new >= slab_w) return;
    const double log_a = lik(eta_new) - lik(hp.eta);
    if (std::log(rng.uniform()) < log_a) hp.eta = eta_new;
  }
}

double d2_loglik(const FranchiseState& fs, double alpha2, double d2) {
  double lp = 0.0;
  for (int gi = 1; gi <= 2; ++gi) {
    const std::vector<int> occ = fs.section(gi, 2).occupancies();
    lp += log_pyp_eppf(occ, alpha2, d2);
  }
  return lp;
}

void update_d2(ChainState& state, const McmcConfig& cfg, Rng& rng) {
  HyperParams& hp = state.hp;
  const auto lik = [&](double d) { return d2_loglik(state.franchise, hp.alpha2, d); };
  if (hp.d2 == 0.0) {
    if (rng.uniform() < 0.5) {
      const double d_new = rng.uniform();
      if (std::log(rng.uniform()) < lik(d_new) - lik(0.0)) hp.d2 = d_new;
    }
    return;
  }
  if (rng.uniform() < 0.5) {
    if (std::log(rng.uniform()) < lik(0.0) - lik(hp.d2)) hp.d2 = 0.0;
  } else {
    const double d_new = hp.d2 + cfg.rw_d2 * rng.normal();
    if (d_new <= 0.0 || d_new >= 1.0) return;
    if (std::log(rng.uniform()) < lik(d_new) - lik(hp.d2)) hp.d2 = d_new;
  }
}

void update_masses(ChainState& state, const McmcConfig& cfg, Rng& rng) {
  HyperParams& hp = state.hp;
  const PriorConfig& pr = cfg.priors;
  const FranchiseState& fs = state.franchise;
  const auto log_prior = [&](double a) { return (pr.mass_shape - 1.0) * std::log(a) - pr.mass_rate * a; };

  const auto section_lik = [&](int si, double alpha, double d) {
    double lp = 0.0;
    for (int gi = 1; gi <= 2; ++gi) lp += log_pyp_eppf(fs.section(gi, si).occupancies(), alpha, d);
    return lp;
  };

  {  // alpha1
    const double a_new = hp.alpha1 * std::exp(cfg.rw_logmass * rng.normal());
    const double log_a = section_lik(1, a_new, 0.0) - section_lik(1, hp.alpha1, 0.0) +
                         log_prior(a_new) - log_prior(hp.alpha1) +
                         std::log(a_new) - std::log(hp.alpha1);
    if (std::log(rng.uniform()) < log_a) hp.alpha1 = a_new;
  }
  {  // alpha2
    const double a_new = hp.alpha2 * std::exp(cfg.rw_logmass * rng.normal());
    const double log_a = section_lik(2, a_new, hp.d2) - section_lik(2, hp.alpha2, hp.d2) +
                         log_prior(a_new) - log_prior(hp.alpha2) +
                         std::log(a_new) - std::log(hp.alpha2);
    if (std::log(rng.uniform()) < log_a) hp.alpha2 = a_new;
  }
}

// Blocked Gibbs update of the truncated base realization G*: conjugate
// relocation of the atom values (which moves the dishes built on them), a
// normal-inverse-gamma refresh of (mu_G, tau_G2) from the atom locations, a
// stick-breaking update of the weights with a Metropolis correction for the
// cuisine-2 menu normalizer, and the conjugate Gamma draw of beta from the
// sticks.
void update_g_star(ChainState& state, const LogitData& data, const McmcConfig& cfg, Rng& rng) {
  const PriorConfig& pr = cfg.priors;
  FranchiseState& fs = state.franchise;
  BaseMeasureG& g = state.g_star;
  const std::size_t L = g.size();
  const int T = fs.T;

  detail::Workspace ws;
  ws.build(data, state.xi, state.chi);

  // menu-draw counts per atom and slot->atom assignments per table
  std::vector<int> n_draws(L, 0);
  int q2_tables = 0;
  std::array<std::array<std::vector<std::vector<long>>, 2>, 2> slot_atoms;
  for (int gi = 1; gi <= 2; ++gi)
    for (int si = 1; si <= 2; ++si) {
      const Section& sec = fs.section(gi, si);
      auto& per_table = slot_atoms[static_cast<std::size_t>(gi - 1)][static_cast<std::size_t>(si - 1)];
      per_table.resize(sec.tables.size());
      for (std::size_t k = 0; k < sec.tables.size(); ++k) {
        if (si == 2) ++q2_tables;
        const int slots = si == 1 ? 1 : T;
        per_table[k].resize(static_cast<std::size_t>(slots));
        for (int t = 0; t < slots; ++t) {
          const long l = g.index_of(sec.tables[k].dish[static_cast<std::size_t>(t)]);
          if (l < 0) throw std::logic_error("update_g_star: dish element is not a G* atom");
          per_table[k][static_cast<std::size_t>(t)] = l;
          ++n_draws[static_cast<std::size_t>(l)];
        }
      }
    }

  // Gaussian likelihood statistics per atom, aggregated over probe slots
  std::vector<double> prec_add(L, 0.0), mean_num(L, 0.0);
  for (int j = 0; j < fs.p; ++j) {
    const std::vector<double>& dish = fs.theta(j);
    for (int t = 0; t < T; ++t) {
      const long l = g.index_of(dish[static_cast<std::size_t>(t)]);
      prec_add[static_cast<std::size_t>(l)] +=
          static_cast<double>(ws.n_t[static_cast<std::size_t>(t)]) / state.hp.sigma2;
      mean_num[static_cast<std::size_t>(l)] += ws.a(j, t) / state.hp.sigma2;
    }
  }

  // 1) relocate atoms conjugately (used atoms carry likelihood, unused ones
  //    are plain prior draws deferred until after the (mu_G, tau_G2) update)
  for (std::size_t l = 0; l < L; ++l) {
    if (prec_add[l] == 0.0) continue;
    const double prec = 1.0 / state.hp.tau_G2 + prec_add[l];
    const double mean = (state.hp.mu_G / state.hp.tau_G2 + mean_num[l]) / prec;
    g.atoms[l] = rng.normal(mean, std::sqrt(1.0 / prec));
  }
  // rewrite dishes from the recorded assignments
  for (int gi = 1; gi <= 2; ++gi)
    for (int si = 1; si <= 2; ++si) {
      Section& sec = fs.section(gi, si);
      const auto& per_table = slot_atoms[static_cast<std::size_t>(gi - 1)][static_cast<std::size_t>(si - 1)];
      for (std::size_t k = 0; k < sec.tables.size(); ++k) {
        if (si == 1) {
          sec.tables[k].dish.assign(static_cast<std::size_t>(T),
                                    g.atoms[static_cast<std::size_t>(per_table[k][0])]);
        } else {
          for (int t = 0; t < T; ++t)
            sec.tables[k].dish[static_cast<std::size_t>(t)] =
                g.atoms[static_cast<std::size_t>(per_table[k][static_cast<std::size_t>(t)])];
        }
      }
    }

  // 2) (mu_G, tau_G2) from all L atom locations (iid draws from G0)
  {
    const double m = static_cast<double>(L);
    double sum = 0.0;
    for (double x : g.atoms) sum += x;
    const double x_bar = sum / m;
    double ssd = 0.0;
    for (double x : g.atoms) ssd += (x - x_bar) * (x - x_bar);
    const double kappa_n = pr.nig_kappa + m;
    const double mu_n = (pr.nig_kappa * pr.nig_mu0 + sum) / kappa_n;
    const double a_n = pr.nig_shape + 0.5 * m;
    const double b_n = pr.nig_rate + 0.5 * ssd +
                       0.5 * pr.nig_kappa * m * (x_bar - pr.nig_mu0) * (x_bar - pr.nig_mu0) / kappa_n;
    state.hp.tau_G2 = rng.inverse_gamma(a_n, b_n);
    state.hp.mu_G = rng.normal(mu_n, std::sqrt(state.hp.tau_G2 / kappa_n));
  }

  // 3) fresh locations for the unused atoms
  for (std::size_t l = 0; l < L; ++l)
    if (n_draws[l] == 0) g.atoms[l] = rng.normal(state.hp.mu_G, std::sqrt(state.hp.tau_G2));

  // 4) stick weights: conjugate betas, Metropolis-corrected for the
  //    (1 - sum_l pi_l^T)^(-q2_tables) menu normalizer
  {
    std::vector<int> n_after(L + 1, 0);
    for (std::size_t l = L; l-- > 0;) n_after[l] = n_after[l + 1] + n_draws[l];
    std::vector<double> new_weights(L);
    double remaining = 1.0;
    for (std::size_t l = 0; l < L; ++l) {
      const double stick =
          (l + 1 == L) ? 1.0
                       : rng.beta(1.0 + static_cast<double>(n_draws[l]),
                                  state.hp.beta_mass + static_cast<double>(n_after[l + 1]));
      new_weights[l] = std::max(stick * remaining, 1e-300);
      remaining *= (1.0 - stick);
    }
    const double log_norm_old = detail::log_w2_normalizer(g, T);
    BaseMeasureG proposal = g;
    proposal.weights = new_weights;
    const double log_norm_new = detail::log_w2_normalizer(proposal, T);
    const double log_a = -static_cast<double>(q2_tables) * (log_norm_new - log_norm_old);
    if (std::log(rng.uniform()) < log_a) g.weights = std::move(new_weights);
  }

  // 5) beta from the sticks implied by the current weights
  {
    double rate = pr.mass_rate;
    double remaining = 1.0;
    for (std::size_t l = 0; l + 1 < L; ++l) {
      double stick = g.weights[l] / std::max(remaining, 1e-12);
      stick = std::clamp(stick, 1e-12, 1.0 - 1e-12);
      rate -= std::log1p(-stick);
      remaining *= (1.0 - stick);
    }
    state.hp.beta_mass = rng.gamma(pr.mass_shape + static_cast<double>(L - 1), rate);
  }
}

}  // namespace

void block3_update(ChainState& state, const LogitData& data, const McmcConfig& cfg, Rng& rng,
                   bool corrupt_sigma2) {
  update_sigma2(state, data, cfg.priors, rng, corrupt_sigma2);
  update_xi(state, data, cfg, rng);
  update_chi(state, data, cfg, rng);
  update_rho_gamma(state, data, cfg, rng);
  update_eta(state, data, cfg, rng);
  update_d2(state, cfg, rng);
  update_masses(state, cfg, rng);
  update_g_star(state, data, cfg, rng);
}

}  // namespace stickydiff
