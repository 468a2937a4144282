#include "stickydiff/geweke.hpp"

#include <cmath>
#include <vector>

#include "mcmc_internal.hpp"
#include "stickydiff/logmath.hpp"

namespace stickydiff {

namespace {

constexpr int n_functions = 6;

struct ForwardDraw {
  ChainState state;
  LogitData data;
};

ForwardDraw forward_draw(const GewekeConfig& cfg, std::span<const double> distances, Rng& rng) {
  const PriorConfig& pr = cfg.mcmc.priors;
  const int p = cfg.p, T = cfg.T;
  const int n = T * cfg.n_per_treatment;

  ChainState st;
  HyperParams& hp = st.hp;
  hp.sigma2 = rng.inverse_gamma(pr.sigma2_shape, pr.sigma2_rate);
  hp.tau_eps2 = rng.inverse_gamma(pr.tau_eps2_shape, pr.tau_eps2_rate);
  hp.alpha1 = rng.gamma(pr.mass_shape, pr.mass_rate);
  hp.alpha2 = rng.gamma(pr.mass_shape, pr.mass_rate);
  hp.beta_mass = rng.gamma(pr.mass_shape, pr.mass_rate);
  hp.tau_G2 = rng.inverse_gamma(pr.nig_shape, pr.nig_rate);
  hp.mu_G = rng.normal(pr.nig_mu0, std::sqrt(hp.tau_G2 / pr.nig_kappa));
  hp.rho1 = rng.uniform(0.5, 1.0);
  hp.d2 = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
  // joint draw of (gamma, eta) under the global feasibility truncation
  double e_min = std::numeric_limits<double>::infinity();
  for (double e : distances) e_min = std::min(e_min, e);
  for (;;) {
    hp.gamma = rng.uniform();
    const double w = hp.eta_slab_width();
    hp.eta = rng.uniform() < 0.5 ? 0.0 : rng.uniform(0.0, w);
    if (hp.eta == 0.0) break;
    if (distances.empty() || hp.eta < e_min / (-std::log(hp.gamma))) break;
  }

  st.xi.resize(static_cast<std::size_t>(n));
  const double sd_xi = std::sqrt(hp.tau_eps2);
  for (double& x : st.xi) x = rng.normal(0.0, sd_xi);
  st.tau_chi2 = rng.inverse_gamma(pr.chi_var_shape, pr.chi_var_rate);
  st.chi.assign(static_cast<std::size_t>(p), 0.0);
  const bool with_chi = cfg.mcmc.include_chi && cfg.mcmc.chi_model != ChiModel::none;
  if (with_chi) {
    const double sd_chi = std::sqrt(st.tau_chi2);
    for (double& x : st.chi) x = rng.normal(0.0, sd_chi);
  }

  st.g_star = stick_breaking_realization(hp.beta_mass, hp.mu_G, hp.tau_G2,
                                         cfg.mcmc.truncation_L, rng);
  st.franchise = simulate_franchise(p, distances, hp, st.g_star, T, rng);
  st.chi_mix.assign.assign(static_cast<std::size_t>(p), 1);
  st.xi_dp.assign.assign(static_cast<std::size_t>(n), 0);
  st.xi_dp.atoms.assign(1, 0.0);

  ForwardDraw out{std::move(st), LogitData{}};
  out.data.T = T;
  out.data.treatments.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.data.treatments[static_cast<std::size_t>(i)] = i / cfg.n_per_treatment + 1;
  out.data.distances.assign(distances.begin(), distances.end());
  out.data.z = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
  const double sd = std::sqrt(out.state.hp.sigma2);
  for (int i = 0; i < n; ++i) {
    const int t = out.data.treatments[static_cast<std::size_t>(i)] - 1;
    for (int j = 0; j < p; ++j)
      out.data.z(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          rng.normal(out.state.xi[static_cast<std::size_t>(i)] + out.state.chi[static_cast<std::size_t>(j)] +
                         out.state.franchise.theta(j)[static_cast<std::size_t>(t)],
                     sd);
  }
  return out;
}

void record(const ChainState& st, std::vector<std::vector<double>>& stats) {
  const FranchiseState& fs = st.franchise;
  double frac2 = 0.0;
  for (std::uint8_t s : fs.s) frac2 += (s == 2) ? 1.0 : 0.0;
  frac2 /= static_cast<double>(fs.p);
  double theta_mean = 0.0;
  for (int j = 0; j < fs.p; ++j)
    for (int t = 0; t < fs.T; ++t) theta_mean += fs.theta(j)[static_cast<std::size_t>(t)];
  theta_mean /= static_cast<double>(fs.p) * fs.T;
  stats[0].push_back(frac2);
  stats[1].push_back(static_cast<double>(fs.total_tables()));
  stats[2].push_back(st.hp.sigma2);
  stats[3].push_back(theta_mean);
  stats[4].push_back(st.hp.eta > 0.0 ? 1.0 : 0.0);
  stats[5].push_back(mean(st.xi));
}

double batch_se(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 16) return std::sqrt(variance(xs) / std::max<std::size_t>(1, n));
  const std::size_t n_batches = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  const std::size_t batch = n / n_batches;
  std::vector<double> means;
  means.reserve(n_batches);
  for (std::size_t b = 0; b < n_batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * batch; i < (b + 1) * batch; ++i) s += xs[i];
    means.push_back(s / static_cast<double>(batch));
  }
  return std::sqrt(variance(means) / static_cast<double>(means.size()));
}

}  // namespace

double GewekeReport::max_abs_z() const {
  double m = 0.0;
  for (double z : z_scores) m = std::max(m, std::fabs(z));
  return m;
}

bool GewekeReport::all_within(double bound) const {
  for (double z : z_scores)
    if (!(std::fabs(z) < bound)) return false;
  return true;
}

GewekeReport joint_distribution_test(const GewekeConfig& cfg, Rng& rng) {
  GewekeReport report;
  report.names = {"frac_diff", "occupied_tables", "sigma2", "mean_theta", "eta_positive", "mean_xi"};
  if (cfg.forward_samples == 0 || cfg.successive_samples == 0) return report;

  std::vector<double> distances(static_cast<std::size_t>(std::max(0, cfg.p - 1)),
                                cfg.p > 1 ? 1.0 / static_cast<double>(cfg.p - 1) : 0.0);

  std::vector<std::vector<double>> fwd(n_functions), succ(n_functions);
  for (long r = 0; r < cfg.forward_samples; ++r) {
    const ForwardDraw draw = forward_draw(cfg, distances, rng);
    record(draw.state, fwd);
  }

  ForwardDraw current = forward_draw(cfg, distances, rng);
  for (long r = 0; r < cfg.successive_samples; ++r) {
    block1_update(current.state, current.data, rng);
    block2_update(current.state, current.data, cfg.mcmc, rng);
    block3_update(current.state, current.data, cfg.mcmc, rng, cfg.corrupt_sigma2);
    // data regeneration step of the successive-conditional sampler
    const double sd = std::sqrt(current.state.hp.sigma2);
    const int n = static_cast<int>(current.data.z.rows());
    for (int i = 0; i < n; ++i) {
      const int t = current.data.treatments[static_cast<std::size_t>(i)] - 1;
      for (int j = 0; j < cfg.p; ++j)
        current.data.z(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
            rng.normal(current.state.xi[static_cast<std::size_t>(i)] +
                           current.state.chi[static_cast<std::size_t>(j)] +
                           current.state.franchise.theta(j)[static_cast<std::size_t>(t)],
                       sd);
    }
    record(current.state, succ);
  }

  for (int f = 0; f < n_functions; ++f) {
    const double mf = mean(fwd[static_cast<std::size_t>(f)]);
    const double ms = mean(succ[static_cast<std::size_t>(f)]);
    const double se_f = std::sqrt(variance(fwd[static_cast<std::size_t>(f)]) /
                                  static_cast<double>(fwd[static_cast<std::size_t>(f)].size()));
    const double se_s = batch_se(succ[static_cast<std::size_t>(f)]);
    report.forward_mean.push_back(mf);
    report.successive_mean.push_back(ms);
    report.forward_se.push_back(se_f);
    report.successive_se.push_back(se_s);
    const double denom = std::sqrt(se_f * se_f + se_s * se_s);
    report.z_scores.push_back(denom > 0.0 ? (ms - mf) / denom : 0.0);
  }
  return report;
}

}  // namespace stickydiff
