#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mcmc_internal.hpp"
#include "stickydiff/baselines.hpp"
#include "stickydiff/errors.hpp"

namespace stickydiff {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(b)] = a;
  }
};

}  // namespace

ChainState initialize(const LogitData& data, const McmcConfig& cfg) {
  cfg.validate();
  const int p = static_cast<int>(data.z.cols());
  const int n = static_cast<int>(data.z.rows());
  const int T = data.T;
  if (p < 1 || n < 1) throw validation_error("initialize: empty data");

  ChainState state;
  state.hp.rho1 = 0.75;
  state.hp.gamma = 0.5;
  state.hp.eta = 0.0;  // spike; the slab is explored by the between-model move
  state.hp.d2 = 0.25;
  state.hp.alpha1 = cfg.priors.mass_shape / cfg.priors.mass_rate;
  state.hp.alpha2 = state.hp.alpha1;
  state.hp.beta_mass = state.hp.alpha1;
  state.hp.sigma2 = cfg.priors.sigma2_rate / (cfg.priors.sigma2_shape - 1.0);
  state.hp.tau_eps2 = cfg.priors.tau_eps2_rate / (cfg.priors.tau_eps2_shape - 1.0);
  state.hp.mu_G = cfg.priors.nig_mu0;
  state.hp.tau_G2 = cfg.priors.nig_rate / (cfg.priors.nig_shape - 1.0);
  state.tau_chi2 = cfg.priors.chi_var_rate / (cfg.priors.chi_var_shape - 1.0);

  state.xi.assign(static_cast<std::size_t>(n), 0.0);
  state.chi.assign(static_cast<std::size_t>(p), 0.0);
  state.chi_mix.assign.assign(static_cast<std::size_t>(p), 1);
  state.xi_dp.assign.assign(static_cast<std::size_t>(n), 0);
  state.xi_dp.atoms.assign(1, 0.0);

  // differential states from per-probe one-way ANOVA on the logit values
  std::vector<int> s_init(static_cast<std::size_t>(p), 1);
  std::vector<double> column(static_cast<std::size_t>(n));
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) column[static_cast<std::size_t>(i)] = data.z(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    const double pval = anova_pvalue_one(column, data.treatments, T);
    s_init[static_cast<std::size_t>(j)] = pval < 0.05 ? 2 : 1;
  }

  // treatment-wise probe means, collapsed to the grand mean when s_j = 1
  std::vector<int> n_t(static_cast<std::size_t>(T), 0);
  for (int t : data.treatments) ++n_t[static_cast<std::size_t>(t - 1)];
  Matrix theta0(static_cast<std::size_t>(p), static_cast<std::size_t>(T));
  for (int j = 0; j < p; ++j) {
    double grand = 0.0;
    std::vector<double> means(static_cast<std::size_t>(T), 0.0);
    for (int i = 0; i < n; ++i) {
      const double z = data.z(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      means[static_cast<std::size_t>(data.treatments[static_cast<std::size_t>(i)] - 1)] += z;
      grand += z;
    }
    grand /= static_cast<double>(n);
    for (int t = 0; t < T; ++t) {
      const double m = s_init[static_cast<std::size_t>(j)] == 1
                           ? grand
                           : means[static_cast<std::size_t>(t)] / static_cast<double>(n_t[static_cast<std::size_t>(t)]);
      theta0(static_cast<std::size_t>(j), static_cast<std::size_t>(t)) = m;
    }
  }

  // single-linkage grouping within each (g,s) at half the overall spread
  double sd = 0.0;
  {
    double sum = 0.0, sum2 = 0.0;
    const double count = static_cast<double>(p) * T;
    for (int j = 0; j < p; ++j)
      for (int t = 0; t < T; ++t) {
        sum += theta0(static_cast<std::size_t>(j), static_cast<std::size_t>(t));
        sum2 += theta0(static_cast<std::size_t>(j), static_cast<std::size_t>(t)) * theta0(static_cast<std::size_t>(j), static_cast<std::size_t>(t));
      }
    const double var = std::max(0.0, sum2 / count - (sum / count) * (sum / count));
    sd = std::sqrt(var);
  }
  const double tol = 0.5 * sd;

  UnionFind uf(p);
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b) {
      if (s_init[static_cast<std::size_t>(a)] != s_init[static_cast<std::size_t>(b)]) continue;
      double dist = 0.0;
      for (int t = 0; t < T; ++t)
        dist = std::max(dist, std::fabs(theta0(static_cast<std::size_t>(a), static_cast<std::size_t>(t)) -
                                        theta0(static_cast<std::size_t>(b), static_cast<std::size_t>(t))));
      if (dist <= tol) uf.unite(a, b);
    }

  // table dish = groupwise means of theta0 over the linked probes
  std::vector<double> root_count(static_cast<std::size_t>(p), 0.0);
  Matrix root_sum(static_cast<std::size_t>(p), static_cast<std::size_t>(T));
  for (int j = 0; j < p; ++j) {
    const int r = uf.find(j);
    root_count[static_cast<std::size_t>(r)] += 1.0;
    for (int t = 0; t < T; ++t)
      root_sum(static_cast<std::size_t>(r), static_cast<std::size_t>(t)) += theta0(static_cast<std::size_t>(j), static_cast<std::size_t>(t));
  }

  FranchiseState& fs = state.franchise;
  fs.p = p;
  fs.T = T;
  fs.g.assign(static_cast<std::size_t>(p), 0);
  fs.s.assign(static_cast<std::size_t>(p), 0);
  fs.v.assign(static_cast<std::size_t>(p), -1);
  std::vector<int> root_table(static_cast<std::size_t>(p), -1);
  for (int j = 0; j < p; ++j) {
    const int si = s_init[static_cast<std::size_t>(j)];
    const int gi = si;  // restaurants start at their namesake cuisine
    const int r = uf.find(j);
    if (root_table[static_cast<std::size_t>(r)] < 0) {
      std::vector<double> dish(static_cast<std::size_t>(T));
      if (si == 1) {
        double m = 0.0;
        for (int t = 0; t < T; ++t) m += root_sum(static_cast<std::size_t>(r), static_cast<std::size_t>(t));
        m /= (root_count[static_cast<std::size_t>(r)] * static_cast<double>(T));
        dish.assign(static_cast<std::size_t>(T), m);
      } else {
        for (int t = 0; t < T; ++t)
          dish[static_cast<std::size_t>(t)] = root_sum(static_cast<std::size_t>(r), static_cast<std::size_t>(t)) /
                                              root_count[static_cast<std::size_t>(r)];
        if (all_equal(dish)) {
          // averaging washed out the differences; keep the menu condition
          const double step = 1e-6 * (1.0 + std::fabs(dish[0]));
          for (int t = 0; t < T; ++t) dish[static_cast<std::size_t>(t)] += step * static_cast<double>(t);
        }
      }
      const int table = static_cast<int>(fs.section(gi, si).tables.size());
      root_table[static_cast<std::size_t>(r)] = table;
      fs.seat(j, gi, si, table, dish);
    } else {
      fs.seat(j, gi, si, root_table[static_cast<std::size_t>(r)], {});
    }
  }
  fs.check_invariants();

  Rng init_rng = Rng(cfg.seed).derive(0x5eed1a11);
  refresh_g_star(state, cfg.truncation_L, init_rng);
  state.check_atom_invariant();
  return state;
}

}  // namespace stickydiff
