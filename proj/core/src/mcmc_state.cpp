#include <cmath>
#include <stdexcept>

#include "mcmc_internal.hpp"
#include "stickydiff/errors.hpp"
#include "stickydiff/logmath.hpp"

namespace stickydiff {

void McmcConfig::validate() const {
  if (burn_in < 0 || samples <= 0) throw validation_error("mcmc config: burn_in >= 0 and samples > 0 required");
  if (thin < 1) throw validation_error("mcmc config: thin must be >= 1");
  if (truncation_L < 2) throw validation_error("mcmc config: truncation_L must be >= 2");
  if (!(clamp_eps > 0.0 && clamp_eps <= 0.01)) throw validation_error("mcmc config: clamp_eps must lie in (0, 0.01]");
  if (eta_quadrature_points < 8) throw validation_error("mcmc config: eta_quadrature_points must be >= 8");
}

void ChainState::check_atom_invariant() const {
  for (int gi = 1; gi <= 2; ++gi)
    for (int si = 1; si <= 2; ++si)
      for (const Table& t : franchise.section(gi, si).tables)
        for (double x : t.dish)
          if (g_star.index_of(x) < 0)
            throw std::logic_error("chain state: dish element missing from G* atoms");
}

namespace detail {

void Workspace::build(const LogitData& data, std::span<const double> xi, std::span<const double> chi) {
  p = static_cast<int>(data.z.cols());
  n = static_cast<int>(data.z.rows());
  T = data.T;
  n_t.assign(static_cast<std::size_t>(T), 0);
  members.assign(static_cast<std::size_t>(T), {});
  for (int i = 0; i < n; ++i) {
    const int t = data.treatments[static_cast<std::size_t>(i)] - 1;
    ++n_t[static_cast<std::size_t>(t)];
    members[static_cast<std::size_t>(t)].push_back(i);
  }
  A.assign(static_cast<std::size_t>(p) * T, 0.0);
  B.assign(static_cast<std::size_t>(p) * T, 0.0);
  for (int j = 0; j < p; ++j) {
    for (int t = 0; t < T; ++t) {
      double sa = 0.0, sb = 0.0;
      for (int i : members[static_cast<std::size_t>(t)]) {
        const double r = data.z(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) -
                         xi[static_cast<std::size_t>(i)] - chi[static_cast<std::size_t>(j)];
        sa += r;
        sb += r * r;
      }
      A[static_cast<std::size_t>(j) * T + t] = sa;
      B[static_cast<std::size_t>(j) * T + t] = sb;
    }
  }
}

double Workspace::loglik_atom(int j, int t, double u, double sigma2) const {
  static constexpr double log_2pi = 1.8378770664093453;
  const double nt = static_cast<double>(n_t[static_cast<std::size_t>(t)]);
  const double ss = b(j, t) - 2.0 * u * a(j, t) + nt * u * u;
  return -0.5 * nt * (log_2pi + std::log(sigma2)) - 0.5 * ss / sigma2;
}

double Workspace::loglik_dish(int j, std::span<const double> dish, double sigma2) const {
  double s = 0.0;
  for (int t = 0; t < T; ++t) s += loglik_atom(j, t, dish[static_cast<std::size_t>(t)], sigma2);
  return s;
}

void ElementDraws::add(double value, int count) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] == value) {
      counts[k] += count;
      total += count;
      return;
    }
  }
  values.push_back(value);
  counts.push_back(count);
  total += count;
}

ElementDraws collect_element_draws(const FranchiseState& fs) {
  ElementDraws draws;
  for (int gi = 1; gi <= 2; ++gi) {
    for (int si = 1; si <= 2; ++si) {
      for (const Table& t : fs.section(gi, si).tables) {
        if (si == 1) {
          draws.add(t.dish[0], 1);
        } else {
          for (double x : t.dish) draws.add(x, 1);
        }
      }
    }
  }
  return draws;
}

double log_w2_normalizer(const BaseMeasureG& g, int T) {
  double sum_pow = 0.0;
  for (double w : g.weights) sum_pow += std::pow(w, T);
  const double norm = 1.0 - sum_pow;
  if (norm <= 0.0) return neg_inf;
  return std::log(norm);
}

double log_menu_prob(const BaseMeasureG& g, int cuisine, std::span<const double> dish,
                     double log_w2_norm) {
  if (cuisine == 1) {
    const long l = g.index_of(dish[0]);
    if (l < 0) throw std::logic_error("log_menu_prob: dish element not an atom of G*");
    return std::log(g.weights[static_cast<std::size_t>(l)]);
  }
  double lp = 0.0;
  for (double x : dish) {
    const long l = g.index_of(x);
    if (l < 0) throw std::logic_error("log_menu_prob: dish element not an atom of G*");
    lp += std::log(g.weights[static_cast<std::size_t>(l)]);
  }
  return lp - log_w2_norm;
}

}  // namespace detail

double loglik_restaurant_transitions(const FranchiseState& fs, std::span<const double> distances,
                                     double rho1, double gamma, double eta) {
  HyperParams hp;
  hp.rho1 = rho1;
  hp.gamma = gamma;
  double lp = 0.0;
  for (int j = 1; j < fs.p; ++j) {
    const double r = eta > 0.0 ? std::exp(-distances[static_cast<std::size_t>(j - 1)] / eta) : 0.0;
    if (r / gamma >= 1.0) return neg_inf;
    const double f1 = fs.s[static_cast<std::size_t>(j - 1)] == 1
                          ? rho1 + (1.0 - rho1) * r / gamma
                          : rho1 - rho1 * r / gamma;
    const double prob = fs.g[static_cast<std::size_t>(j)] == 1 ? f1 : 1.0 - f1;
    if (!(prob > 0.0)) return neg_inf;
    lp += std::log(prob);
  }
  return lp;
}

double loglik_first_and_cuisines(const FranchiseState& fs, double rho1, double gamma) {
  HyperParams hp;
  hp.rho1 = rho1;
  hp.gamma = gamma;
  double lp = std::log(fs.g[0] == 1 ? rho1 : 1.0 - rho1);
  for (int j = 0; j < fs.p; ++j) {
    const double q1 = cuisine_prob(fs.g[static_cast<std::size_t>(j)], hp);
    lp += std::log(fs.s[static_cast<std::size_t>(j)] == 1 ? q1 : 1.0 - q1);
  }
  return lp;
}

double eta_conditional_log_odds(const FranchiseState& fs, std::span<const double> distances,
                                double rho1, double gamma, int n_points) {
  const double slab_width = -1.0 / std::log(gamma);
  double eta_max = slab_width;
  if (!distances.empty()) {
    double e_min = distances[0];
    for (double e : distances) e_min = std::min(e_min, e);
    eta_max = std::min(slab_width, e_min / (-std::log(gamma)));
  }
  const double delta = eta_max / static_cast<double>(n_points);
  std::vector<double> logs(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double eta = (static_cast<double>(i) + 0.5) * delta;
    logs[static_cast<std::size_t>(i)] = loglik_restaurant_transitions(fs, distances, rho1, gamma, eta);
  }
  const double log_integral = log_sum_exp(logs) + std::log(delta / slab_width);
  const double log_null = loglik_restaurant_transitions(fs, distances, rho1, gamma, 0.0);
  return log_integral - log_null;
}

double data_loglik(const ChainState& state, const LogitData& data) {
  detail::Workspace ws;
  ws.build(data, state.xi, state.chi);
  double lp = 0.0;
  for (int j = 0; j < ws.p; ++j) lp += ws.loglik_dish(j, state.franchise.theta(j), state.hp.sigma2);
  return lp;
}

double block1_log_target(const ChainState& state, const LogitData& data) {
  const FranchiseState& fs = state.franchise;
  double lp = data_loglik(state, data);
  lp += loglik_restaurant_transitions(fs, data.distances, state.hp.rho1, state.hp.gamma, state.hp.eta);
  lp += loglik_first_and_cuisines(fs, state.hp.rho1, state.hp.gamma);
  const double w2n = detail::log_w2_normalizer(state.g_star, fs.T);
  for (int gi = 1; gi <= 2; ++gi) {
    for (int si = 1; si <= 2; ++si) {
      const Section& sec = fs.section(gi, si);
      const std::vector<int> occ = sec.occupancies();
      lp += log_pyp_eppf(occ, state.hp.alpha(si), state.hp.discount(si));
      for (const Table& t : sec.tables)
        lp += detail::log_menu_prob(state.g_star, si, t.dish, w2n);
    }
  }
  return lp;
}

void refresh_g_star(ChainState& state, int truncation_L, Rng& rng) {
  const detail::ElementDraws draws = detail::collect_element_draws(state.franchise);
  const std::size_t m = draws.values.size();
  const double beta = state.hp.beta_mass;

  BaseMeasureG g;
  // Dirichlet(R_1, ..., R_m, beta) split between the existing atoms and the
  // fresh remainder, realized through gamma draws.
  std::vector<double> raw(m + 1);
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    raw[k] = rng.gamma(static_cast<double>(draws.counts[k]), 1.0);
    total += raw[k];
  }
  raw[m] = rng.gamma(beta, 1.0);
  total += raw[m];

  const int fresh = std::max(truncation_L - static_cast<int>(m), 8);
  g.atoms.reserve(m + static_cast<std::size_t>(fresh));
  g.weights.reserve(m + static_cast<std::size_t>(fresh));
  for (std::size_t k = 0; k < m; ++k) {
    g.atoms.push_back(draws.values[k]);
    g.weights.push_back(raw[k] / total);
  }
  const double w_rest = raw[m] / total;
  double remaining = 1.0;
  const double sd = std::sqrt(state.hp.tau_G2);
  for (int l = 0; l < fresh; ++l) {
    const double stick = (l + 1 == fresh) ? 1.0 : rng.beta(1.0, beta);
    g.atoms.push_back(rng.normal(state.hp.mu_G, sd));
    g.weights.push_back(w_rest * stick * remaining);
    remaining *= (1.0 - stick);
  }
  // floor against underflow so menu log probabilities stay finite
  for (double& w : g.weights) w = std::max(w, 1e-300);
  state.g_star = std::move(g);
}

}  // namespace stickydiff
