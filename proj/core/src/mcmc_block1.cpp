#include <cmath>
#include <vector>

#include "mcmc_internal.hpp"
#include "stickydiff/logmath.hpp"

namespace stickydiff {

namespace {

using detail::Workspace;

struct Option {
  int gi = 0, si = 0;
  int table = -1;  // -1 = new table
  double logw = neg_inf;
};

// Probability of restaurant g for probe j given the predecessor's cuisine.
double log_f_restaurant(const FranchiseState& fs, std::span<const double> distances,
                        const HyperParams& hp, int j, int gi) {
  if (j == 0) return std::log(gi == 1 ? hp.rho1 : hp.rho2());
  const double r = hp.eta > 0.0
                       ? std::exp(-distances[static_cast<std::size_t>(j - 1)] / hp.eta)
                       : 0.0;
  const double f1 = restaurant_prob(fs.s[static_cast<std::size_t>(j - 1)], r, hp);
  return std::log(gi == 1 ? f1 : 1.0 - f1);
}

// Sequential transition factor of probe jn = j+1 given the current seating of
// everything else including j (counts exclude jn itself): restaurant factor,
// PYP table factor, and the menu probability when jn opens its own table.
double b2_log(const FranchiseState& fs, std::span<const double> distances, const HyperParams& hp,
              const BaseMeasureG& g_star, double lw2norm, int j) {
  const int jn = j + 1;
  const int gn = fs.g[static_cast<std::size_t>(jn)];
  const int sn = fs.s[static_cast<std::size_t>(jn)];
  const int vn = fs.v[static_cast<std::size_t>(jn)];
  double lp = log_f_restaurant(fs, distances, hp, jn, gn);

  const Section& sec = fs.section(gn, sn);
  const double alpha = hp.alpha(sn);
  const double d = hp.discount(sn);
  const int m = sec.tables[static_cast<std::size_t>(vn)].occupancy - 1;
  const int total_x = sec.customers - 1;
  const int tables_x = static_cast<int>(sec.tables.size()) - (m == 0 ? 1 : 0);
  if (m >= 1) {
    lp += std::log(static_cast<double>(m) - d);
  } else {
    lp += std::log(alpha + d * static_cast<double>(tables_x));
    lp += detail::log_menu_prob(g_star, sn, sec.tables[static_cast<std::size_t>(vn)].dish, lw2norm);
  }
  lp -= std::log(static_cast<double>(total_x) + alpha);
  return lp;
}

// The reseated probe j and its successor jn are interchangeable table-mates
// when both sit alone (apart from each other) at same-dish tables of one
// section; the completion then chooses between the shared and the separate
// arrangement. Returns false when the placement of jn is forced.
bool completion_ambiguous(const FranchiseState& fs, int j, int jn) {
  const std::size_t ju = static_cast<std::size_t>(j), jnu = static_cast<std::size_t>(jn);
  if (fs.g[ju] != fs.g[jnu] || fs.s[ju] != fs.s[jnu]) return false;
  const Section& sec = fs.section(fs.g[ju], fs.s[ju]);
  const int vj = fs.v[ju], vn = fs.v[jnu];
  const int occ_j = sec.tables[static_cast<std::size_t>(vj)].occupancy - 1 - (vn == vj ? 1 : 0);
  const int occ_n = sec.tables[static_cast<std::size_t>(vn)].occupancy - 1 - (vj == vn ? 1 : 0);
  if (occ_j != 0 || occ_n != 0) return false;
  return sec.tables[static_cast<std::size_t>(vj)].dish == sec.tables[static_cast<std::size_t>(vn)].dish;
}

// Log weights of the two arrangements (share, separate) in an ambiguous
// configuration; proportional to the jn-transition factors.
void completion_weights(const FranchiseState& fs, const HyperParams& hp,
                        const BaseMeasureG& g_star, double lw2norm, int j, int jn,
                        double& lw_join, double& lw_own) {
  const std::size_t ju = static_cast<std::size_t>(j), jnu = static_cast<std::size_t>(jn);
  const int si = fs.s[ju];
  const Section& sec = fs.section(fs.g[ju], si);
  const double alpha = hp.alpha(si);
  const double d = hp.discount(si);
  const int vj = fs.v[ju], vn = fs.v[jnu];
  int tables_with_others = 0;
  for (std::size_t k = 0; k < sec.tables.size(); ++k) {
    int occ = sec.tables[k].occupancy;
    if (static_cast<int>(k) == vj) --occ;
    if (static_cast<int>(k) == vn) --occ;
    if (occ > 0) ++tables_with_others;
  }
  const int m_tilde = tables_with_others + 1;  // plus the table probe j holds
  lw_join = std::log(1.0 - d);
  lw_own = std::log(alpha + d * static_cast<double>(m_tilde)) +
           detail::log_menu_prob(g_star, si, sec.tables[static_cast<std::size_t>(vn)].dish, lw2norm);
}

struct ProbeScratch {
  std::vector<double> atom_ll;   // T x L treatment likelihood per atom
  std::vector<double> log_pi;    // L
  std::vector<double> s_t;       // per-treatment log sums
  std::vector<double> suffix_s;  // suffix sums of s_t
  std::vector<double> buf;
};

void fill_atom_likelihoods(const Workspace& ws, const BaseMeasureG& g, int j, double sigma2,
                           ProbeScratch& sc) {
  const std::size_t L = g.size();
  const int T = ws.T;
  sc.atom_ll.resize(static_cast<std::size_t>(T) * L);
  sc.log_pi.resize(L);
  for (std::size_t l = 0; l < L; ++l) sc.log_pi[l] = std::log(g.weights[l]);
  for (int t = 0; t < T; ++t)
    for (std::size_t l = 0; l < L; ++l)
      sc.atom_ll[static_cast<std::size_t>(t) * L + l] = ws.loglik_atom(j, t, g.atoms[l], sigma2);
  sc.s_t.resize(static_cast<std::size_t>(T));
  sc.buf.resize(L);
  for (int t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < L; ++l)
      sc.buf[l] = sc.log_pi[l] + sc.atom_ll[static_cast<std::size_t>(t) * L + l];
    sc.s_t[static_cast<std::size_t>(t)] = log_sum_exp(sc.buf);
  }
  sc.suffix_s.assign(static_cast<std::size_t>(T) + 1, 0.0);
  for (int t = T - 1; t >= 0; --t)
    sc.suffix_s[static_cast<std::size_t>(t)] = sc.suffix_s[static_cast<std::size_t>(t) + 1] + sc.s_t[static_cast<std::size_t>(t)];
}

// log integral of the probe likelihood against the cuisine-1 menu.
double log_marginal_w1(const ProbeScratch& sc, int T, std::size_t L, std::vector<double>& buf) {
  buf.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    double s = sc.log_pi[l];
    for (int t = 0; t < T; ++t) s += sc.atom_ll[static_cast<std::size_t>(t) * L + l];
    buf[l] = s;
  }
  return log_sum_exp(buf);
}

// log integral against the cuisine-2 menu: product of per-treatment sums
// minus the all-equal diagonal, renormalized by (1 - sum_l pi_l^T).
double log_marginal_w2(const ProbeScratch& sc, int T, std::size_t L, double lw2norm,
                       std::vector<double>& buf) {
  buf.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    double s = static_cast<double>(T) * sc.log_pi[l];
    for (int t = 0; t < T; ++t) s += sc.atom_ll[static_cast<std::size_t>(t) * L + l];
    buf[l] = s;
  }
  const double all_eq = log_sum_exp(buf);
  return log_sub(sc.suffix_s[0], all_eq) - lw2norm;
}

// Draws a new cuisine-1 dish from its conditional posterior over the atoms.
std::vector<double> sample_new_dish_w1(const ProbeScratch& sc, const BaseMeasureG& g, int T,
                                       Rng& rng, std::vector<double>& buf) {
  const std::size_t L = g.size();
  buf.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    double s = sc.log_pi[l];
    for (int t = 0; t < T; ++t) s += sc.atom_ll[static_cast<std::size_t>(t) * L + l];
    buf[l] = s;
  }
  const std::size_t pick = rng.categorical_log(buf);
  return std::vector<double>(static_cast<std::size_t>(T), g.atoms[pick]);
}

// Sequential exact draw of a cuisine-2 dish from its conditional posterior,
// with the all-equal event excluded through suffix corrections.
std::vector<double> sample_new_dish_w2(const ProbeScratch& sc, const BaseMeasureG& g, int T,
                                       Rng& rng, std::vector<double>& buf) {
  const std::size_t L = g.size();
  std::vector<long> picks(static_cast<std::size_t>(T));
  // suffix of the run atom's own weights is accumulated lazily below
  long run_atom = -1;
  bool run_alive = true;
  buf.resize(L);
  for (int t = 0; t < T; ++t) {
    if (!run_alive) {
      for (std::size_t l = 0; l < L; ++l)
        buf[l] = sc.log_pi[l] + sc.atom_ll[static_cast<std::size_t>(t) * L + l];
      picks[static_cast<std::size_t>(t)] = static_cast<long>(rng.categorical_log(buf));
      continue;
    }
    const double suff_s = sc.suffix_s[static_cast<std::size_t>(t) + 1];
    for (std::size_t l = 0; l < L; ++l) {
      const double base = sc.log_pi[l] + sc.atom_ll[static_cast<std::size_t>(t) * L + l];
      double corr;
      const bool continues_run = (t == 0) || (static_cast<long>(l) == run_atom);
      if (continues_run) {
        double suff_w = 0.0;  // this atom's weight over the remaining slots
        for (int t2 = t + 1; t2 < T; ++t2)
          suff_w += sc.log_pi[l] + sc.atom_ll[static_cast<std::size_t>(t2) * L + l];
        corr = log_sub(suff_s, suff_w);
      } else {
        corr = suff_s;
      }
      buf[l] = base + corr;
    }
    const long pick = static_cast<long>(rng.categorical_log(buf));
    picks[static_cast<std::size_t>(t)] = pick;
    if (t == 0) {
      run_atom = pick;
    } else if (pick != run_atom) {
      run_alive = false;
    }
  }
  std::vector<double> dish(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) dish[static_cast<std::size_t>(t)] = g.atoms[static_cast<std::size_t>(picks[static_cast<std::size_t>(t)])];
  return dish;
}

}  // namespace

Block1Stats block1_update(ChainState& state, const LogitData& data, Rng& rng,
                          int probe_begin, int probe_end) {
  Block1Stats stats;
  FranchiseState& fs = state.franchise;
  const HyperParams& hp = state.hp;
  const BaseMeasureG& g_star = state.g_star;
  const int p = fs.p;
  const int T = fs.T;
  const std::size_t L = g_star.size();

  Workspace ws;
  ws.build(data, state.xi, state.chi);
  const double lw2norm = detail::log_w2_normalizer(g_star, T);

  ProbeScratch sc;
  std::vector<Option> options;
  std::vector<double> logw, buf;

  for (int j = probe_begin; j < probe_end; ++j) {
    const bool last = (j == p - 1);
    const int jn = j + 1;

    double b2_old = 0.0, comp_rev = 0.0;
    if (!last) {
      b2_old = b2_log(fs, data.distances, hp, g_star, lw2norm, j);
      if (completion_ambiguous(fs, j, jn)) {
        double lw_join, lw_own;
        completion_weights(fs, hp, g_star, lw2norm, j, jn, lw_join, lw_own);
        const double z = log_add(lw_join, lw_own);
        const bool shared = fs.v[static_cast<std::size_t>(j)] == fs.v[static_cast<std::size_t>(jn)];
        comp_rev = (shared ? lw_join : lw_own) - z;
      }
    }

    const FranchiseState snapshot = fs;
    fs.unseat(j);

    fill_atom_likelihoods(ws, g_star, j, hp.sigma2, sc);

    // exclusion of probe jn from all counts while building the proposal
    const int g_jn = last ? 0 : fs.g[static_cast<std::size_t>(jn)];
    const int s_jn = last ? 0 : fs.s[static_cast<std::size_t>(jn)];
    const int v_jn = last ? -1 : fs.v[static_cast<std::size_t>(jn)];

    options.clear();
    logw.clear();
    for (int gi = 1; gi <= 2; ++gi) {
      for (int si = 1; si <= 2; ++si) {
        const double q1 = cuisine_prob(gi, hp);
        double base = std::log(si == 1 ? q1 : 1.0 - q1);
        base += log_f_restaurant(fs, data.distances, hp, j, gi);
        const double alpha = hp.alpha(si);
        const double d = hp.discount(si);
        const Section& sec = fs.section(gi, si);
        const bool excl_here = !last && g_jn == gi && s_jn == si;
        const int total_x = sec.customers - (excl_here ? 1 : 0);
        const double denom = std::log(static_cast<double>(total_x) + alpha);
        int tables_x = 0;
        for (std::size_t k = 0; k < sec.tables.size(); ++k) {
          const int m = sec.tables[k].occupancy - (excl_here && v_jn == static_cast<int>(k) ? 1 : 0);
          if (m <= 0) continue;
          ++tables_x;
          options.push_back(Option{gi, si, static_cast<int>(k), 0.0});
          logw.push_back(base + std::log(static_cast<double>(m) - d) - denom +
                         ws.loglik_dish(j, sec.tables[k].dish, hp.sigma2));
        }
        const double lmarg = si == 1 ? log_marginal_w1(sc, T, L, buf)
                                     : log_marginal_w2(sc, T, L, lw2norm, buf);
        options.push_back(Option{gi, si, -1, 0.0});
        logw.push_back(base + std::log(alpha + d * static_cast<double>(tables_x)) - denom + lmarg);
      }
    }

    const std::size_t pick = rng.categorical_log(logw);
    const Option& opt = options[pick];
    if (opt.table >= 0) {
      fs.seat(j, opt.gi, opt.si, opt.table, {});
    } else {
      std::vector<double> dish = opt.si == 1 ? sample_new_dish_w1(sc, g_star, T, rng, buf)
                                             : sample_new_dish_w2(sc, g_star, T, rng, buf);
      fs.seat(j, opt.gi, opt.si, static_cast<int>(fs.section(opt.gi, opt.si).tables.size()),
              dish);
    }

    if (last) {
      ++stats.proposals;
      ++stats.accepts;
      continue;
    }

    // completion: place jn, randomizing between the shared and separate
    // arrangement when both are compatible with its dish
    double comp_fwd = 0.0;
    if (completion_ambiguous(fs, j, jn)) {
      // jn sits at its own singleton here: a proposed new table always gets a
      // fresh label, so the shared arrangement can only arise via the draw.
      double lw_join, lw_own;
      completion_weights(fs, hp, g_star, lw2norm, j, jn, lw_join, lw_own);
      const double z = log_add(lw_join, lw_own);
      const bool choose_join = std::log(rng.uniform()) < lw_join - z;
      comp_fwd = (choose_join ? lw_join : lw_own) - z;
      if (choose_join) {
        fs.unseat(jn);
        fs.seat(jn, fs.g[static_cast<std::size_t>(j)], fs.s[static_cast<std::size_t>(j)],
                fs.v[static_cast<std::size_t>(j)], {});
      }
    }

    const double b2_new = b2_log(fs, data.distances, hp, g_star, lw2norm, j);
    const double log_a = (b2_new - b2_old) + (comp_rev - comp_fwd);
    ++stats.proposals;
    if (std::log(rng.uniform()) < log_a) {
      ++stats.accepts;
    } else {
      fs = snapshot;
    }
  }
  return stats;
}

Block1Stats block1_update(ChainState& state, const LogitData& data, Rng& rng) {
  return block1_update(state, data, rng, 0, state.franchise.p);
}

}  // namespace stickydiff
