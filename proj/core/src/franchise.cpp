#include "stickydiff/franchise.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "stickydiff/errors.hpp"

namespace stickydiff {

double HyperParams::eta_slab_width() const { return -1.0 / std::log(gamma); }

void HyperParams::validate() const {
  if (!(rho1 > 0.5 && rho1 < 1.0)) throw validation_error("hyperparams: rho1 must lie in (0.5, 1)");
  if (!(gamma > 0.0 && gamma < 1.0)) throw validation_error("hyperparams: gamma must lie in (0, 1)");
  if (d1 != 0.0) throw validation_error("hyperparams: d1 is fixed at 0");
  if (!(d2 >= 0.0 && d2 < 1.0)) throw validation_error("hyperparams: d2 must lie in [0, 1)");
  if (eta < 0.0) throw validation_error("hyperparams: eta must be non-negative");
  if (eta > 0.0 && !(eta < eta_slab_width()))
    throw validation_error("hyperparams: positive eta must satisfy eta < -1/log(gamma)");
  if (!(alpha1 > 0.0 && alpha2 > 0.0 && beta_mass > 0.0))
    throw validation_error("hyperparams: mass parameters must be positive");
  if (!(tau_G2 > 0.0 && sigma2 > 0.0 && tau_eps2 > 0.0))
    throw validation_error("hyperparams: variances must be positive");
}

void BaseMeasureG::validate() const {
  if (atoms.empty() || atoms.size() != weights.size())
    throw validation_error("base measure: atoms/weights mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw validation_error("base measure: weights must be positive");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-10)
    throw validation_error("base measure: weights must sum to 1");
  for (std::size_t a = 0; a < atoms.size(); ++a)
    for (std::size_t b = a + 1; b < atoms.size(); ++b)
      if (atoms[a] == atoms[b]) throw validation_error("base measure: atoms must be distinct");
}

long BaseMeasureG::index_of(double value) const {
  for (std::size_t l = 0; l < atoms.size(); ++l)
    if (atoms[l] == value) return static_cast<long>(l);
  return -1;
}

double BaseMeasureG::sample_atom(Rng& rng) const {
  return atoms[rng.categorical(weights)];
}

BaseMeasureG stick_breaking_realization(double beta_mass, double mu, double tau2, int L, Rng& rng) {
  if (L < 1) throw std::invalid_argument("stick_breaking_realization: L must be >= 1");
  BaseMeasureG g;
  g.atoms.resize(static_cast<std::size_t>(L));
  g.weights.resize(static_cast<std::size_t>(L));
  double remaining = 1.0;
  const double sd = std::sqrt(tau2);
  for (int l = 0; l < L; ++l) {
    const double stick = (l + 1 == L) ? 1.0 : rng.beta(1.0, beta_mass);
    // floor against underflow in the deep tail
    g.weights[static_cast<std::size_t>(l)] = std::max(stick * remaining, 1e-300);
    remaining *= (1.0 - stick);
    g.atoms[static_cast<std::size_t>(l)] = rng.normal(mu, sd);
  }
  return g;
}

std::vector<int> Section::occupancies() const {
  std::vector<int> out;
  out.reserve(tables.size());
  for (const Table& t : tables) out.push_back(t.occupancy);
  return out;
}

int FranchiseState::total_tables() const {
  int m = 0;
  for (const auto& row : sections)
    for (const Section& sec : row) m += static_cast<int>(sec.tables.size());
  return m;
}

void FranchiseState::seat(int j, int gi, int si, int table, const std::vector<double>& dish) {
  Section& sec = section(gi, si);
  if (table == static_cast<int>(sec.tables.size())) {
    sec.tables.push_back(Table{dish, 1});
  } else {
    sec.tables[static_cast<std::size_t>(table)].occupancy += 1;
  }
  sec.customers += 1;
  g[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(gi);
  s[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(si);
  v[static_cast<std::size_t>(j)] = table;
}

void FranchiseState::unseat(int j) {
  const int gi = g[static_cast<std::size_t>(j)];
  const int si = s[static_cast<std::size_t>(j)];
  const int table = v[static_cast<std::size_t>(j)];
  Section& sec = section(gi, si);
  Table& t = sec.tables[static_cast<std::size_t>(table)];
  t.occupancy -= 1;
  sec.customers -= 1;
  if (t.occupancy == 0) {
    sec.tables.erase(sec.tables.begin() + table);
    for (int k = 0; k < p; ++k) {
      if (k == j) continue;
      if (g[static_cast<std::size_t>(k)] == gi && s[static_cast<std::size_t>(k)] == si &&
          v[static_cast<std::size_t>(k)] > table)
        v[static_cast<std::size_t>(k)] -= 1;
    }
  }
  v[static_cast<std::size_t>(j)] = -1;
}

void FranchiseState::check_invariants(bool strict_menu) const {
  std::array<std::array<std::vector<int>, 2>, 2> counts;
  for (int gi = 0; gi < 2; ++gi)
    for (int si = 0; si < 2; ++si)
      counts[gi][si].assign(sections[gi][si].tables.size(), 0);

  for (int j = 0; j < p; ++j) {
    const int gi = g[static_cast<std::size_t>(j)];
    const int si = s[static_cast<std::size_t>(j)];
    if ((gi != 1 && gi != 2) || (si != 1 && si != 2))
      throw std::logic_error("franchise: bad restaurant/cuisine label");
    const Section& sec = section(gi, si);
    const int table = v[static_cast<std::size_t>(j)];
    if (table < 0 || table >= static_cast<int>(sec.tables.size()))
      throw std::logic_error("franchise: table index out of range");
    ++counts[gi - 1][si - 1][static_cast<std::size_t>(table)];
  }
  for (int gi = 0; gi < 2; ++gi)
    for (int si = 0; si < 2; ++si) {
      const Section& sec = sections[gi][si];
      int total = 0;
      for (std::size_t k = 0; k < sec.tables.size(); ++k) {
        if (sec.tables[k].occupancy != counts[gi][si][k])
          throw std::logic_error("franchise: occupancy bookkeeping mismatch");
        if (sec.tables[k].occupancy <= 0)
          throw std::logic_error("franchise: empty table not compacted");
        if (static_cast<int>(sec.tables[k].dish.size()) != T)
          throw std::logic_error("franchise: dish dimension mismatch");
        total += sec.tables[k].occupancy;
        if (strict_menu) {
          const bool eq = all_equal(sec.tables[k].dish);
          if (si == 0 && !eq) throw std::logic_error("franchise: cuisine-1 dish not all-equal");
          if (si == 1 && eq) throw std::logic_error("franchise: cuisine-2 dish all-equal");
        }
      }
      if (total != sec.customers) throw std::logic_error("franchise: customer count mismatch");
    }
}

double affinity(double e, double eta) {
  if (e <= 0.0) throw std::invalid_argument("affinity: distance must be positive");
  if (eta < 0.0) throw std::invalid_argument("affinity: eta must be non-negative");
  if (eta == 0.0) return 0.0;
  return std::exp(-e / eta);
}

double restaurant_prob(int s_prev, double r, const HyperParams& hp) {
  if (r < 0.0 || r >= 1.0) throw std::invalid_argument("restaurant_prob: affinity out of range");
  const double ratio = r / hp.gamma;
  if (ratio >= 1.0)
    throw constraint_error("restaurant_prob: r/gamma >= 1 does not define a mass function");
  return s_prev == 1 ? hp.rho1 + hp.rho2() * ratio : hp.rho1 - hp.rho1 * ratio;
}

double cuisine_prob(int g, const HyperParams& hp) {
  return g == 1 ? hp.rho1 + hp.rho2() * hp.gamma : hp.rho1 - hp.rho1 * hp.gamma;
}

std::vector<double> table_predictive(std::span<const int> occupancies, double alpha_s, double d_s) {
  const std::size_t m = occupancies.size();
  if (m == 0 && alpha_s <= 0.0)
    throw std::invalid_argument("table_predictive: no tables and zero mass");
  std::vector<double> probs(m + 1);
  double total = alpha_s;
  for (std::size_t k = 0; k < m; ++k) {
    if (occupancies[k] < 1) throw std::invalid_argument("table_predictive: counts must be >= 1");
    total += static_cast<double>(occupancies[k]);
  }
  for (std::size_t k = 0; k < m; ++k)
    probs[k] = (static_cast<double>(occupancies[k]) - d_s) / total;
  probs[m] = (alpha_s + static_cast<double>(m) * d_s) / total;
  return probs;
}

namespace {

// Exact sequential draw from W_2 without rejection: while all elements so far
// coincide with atom a, the next element b carries the correction factor
// (1 - I(b==a) * w_a^{remaining}).
std::vector<double> sample_dish_w2_sequential(const BaseMeasureG& G, int T, Rng& rng) {
  const std::size_t L = G.size();
  std::vector<double> dish(static_cast<std::size_t>(T));
  std::vector<double> w(L);
  long run_atom = -1;  // atom all previous elements equal, or -1 once broken
  for (int t = 0; t < T; ++t) {
    const int remaining = T - 1 - t;
    if (t > 0 && run_atom < 0) {
      dish[static_cast<std::size_t>(t)] = G.sample_atom(rng);
      continue;
    }
    for (std::size_t l = 0; l < L; ++l) {
      double f = 1.0;
      if (t == 0) {
        f = 1.0 - std::pow(G.weights[l], remaining);
      } else if (static_cast<long>(l) == run_atom) {
        f = 1.0 - std::pow(G.weights[l], remaining);
      }
      w[l] = G.weights[l] * f;
    }
    const std::size_t pick = rng.categorical(w);
    dish[static_cast<std::size_t>(t)] = G.atoms[pick];
    if (t == 0)
      run_atom = static_cast<long>(pick);
    else if (run_atom >= 0 && static_cast<long>(pick) != run_atom)
      run_atom = -1;
  }
  return dish;
}

}  // namespace

std::vector<double> sample_dish(int s, const BaseMeasureG& G, int T, Rng& rng) {
  if (T < 2) throw std::invalid_argument("sample_dish: need T >= 2");
  if (s == 1) {
    const double psi = G.sample_atom(rng);
    return std::vector<double>(static_cast<std::size_t>(T), psi);
  }
  if (G.size() < 2)
    throw constraint_error("sample_dish: cuisine 2 needs at least two atoms in G");
  constexpr int retry_cap = 1000;
  for (int attempt = 0; attempt < retry_cap; ++attempt) {
    std::vector<double> dish(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) dish[static_cast<std::size_t>(t)] = G.sample_atom(rng);
    if (!all_equal(dish)) return dish;
  }
  return sample_dish_w2_sequential(G, T, rng);
}

FranchiseState simulate_franchise(int p, std::span<const double> distances,
                                  const HyperParams& hp, const BaseMeasureG& G, int T, Rng& rng) {
  hp.validate();
  G.validate();
  if (p < 1) throw std::invalid_argument("simulate_franchise: p must be >= 1");
  if (p > 1 && static_cast<int>(distances.size()) != p - 1)
    throw std::invalid_argument("simulate_franchise: need p-1 distances");

  FranchiseState fs;
  fs.p = p;
  fs.T = T;
  fs.g.assign(static_cast<std::size_t>(p), 0);
  fs.s.assign(static_cast<std::size_t>(p), 0);
  fs.v.assign(static_cast<std::size_t>(p), -1);

  for (int j = 0; j < p; ++j) {
    double p_rest1 = hp.rho1;
    if (j > 0) {
      const double r = affinity(distances[static_cast<std::size_t>(j - 1)], hp.eta);
      p_rest1 = restaurant_prob(fs.s[static_cast<std::size_t>(j - 1)], r, hp);
    }
    const int gi = rng.bernoulli(p_rest1) ? 1 : 2;
    const int si = rng.bernoulli(cuisine_prob(gi, hp)) ? 1 : 2;

    Section& sec = fs.section(gi, si);
    const std::vector<int> occ = sec.occupancies();
    const std::vector<double> pred = table_predictive(occ, hp.alpha(si), hp.discount(si));
    const int table = static_cast<int>(rng.categorical(pred));
    if (table == static_cast<int>(sec.tables.size())) {
      fs.seat(j, gi, si, table, sample_dish(si, G, T, rng));
    } else {
      fs.seat(j, gi, si, table, {});  // dish already at the table
    }
  }
  return fs;
}

ClusterSet extract_clusters(const FranchiseState& fs) {
  ClusterSet cs;
  cs.allocation.assign(static_cast<std::size_t>(fs.p), -1);
  std::map<std::vector<double>, int> index;
  for (int gi = 1; gi <= 2; ++gi)
    for (int si = 1; si <= 2; ++si) {
      const Section& sec = fs.section(gi, si);
      for (std::size_t k = 0; k < sec.tables.size(); ++k) {
        const Table& t = sec.tables[k];
        auto [it, inserted] = index.try_emplace(t.dish, static_cast<int>(cs.dishes.size()));
        if (inserted) {
          cs.dishes.push_back(t.dish);
          cs.cuisine.push_back(si);
          cs.table_count.push_back(0);
          cs.members.emplace_back();
          cs.table_refs.emplace_back();
        }
        cs.table_count[static_cast<std::size_t>(it->second)] += 1;
        cs.table_refs[static_cast<std::size_t>(it->second)].push_back({gi, si, static_cast<int>(k)});
      }
    }
  for (int j = 0; j < fs.p; ++j) {
    const auto it = index.find(fs.theta(j));
    cs.allocation[static_cast<std::size_t>(j)] = it->second;
    cs.members[static_cast<std::size_t>(it->second)].push_back(j);
  }
  return cs;
}

}  // namespace stickydiff
