#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "stickydiff/logmath.hpp"
#include "stickydiff/mcmc.hpp"

using namespace stickydiff;

// Frozen two-probe instance with a two-atom G*: the full configuration space
// is enumerable, so the Block-1 chain can be compared against brute force.
namespace {

struct Config {
  int g1, s1, d1;
  int g2, s2, d2;
  bool shared;

  std::string key() const {
    return std::to_string(g1) + std::to_string(s1) + std::to_string(d1) +
           std::to_string(g2) + std::to_string(s2) + std::to_string(d2) + (shared ? "S" : "-");
  }
};

struct Fixture {
  LogitData data;
  HyperParams hp;
  BaseMeasureG g;
  std::vector<std::vector<double>> dishes1;  // cuisine-1 dishes by atom
  std::vector<std::vector<double>> dishes2;  // cuisine-2 dishes: (a,b), (b,a)

  Fixture() {
    data.T = 2;
    data.treatments = {1, 1, 2, 2};
    data.distances = {1.0};
    data.z = Matrix(4, 2);
    const double z_vals[4][2] = {{0.1, 0.5}, {-0.2, 0.8}, {0.3, -0.4}, {0.0, -0.1}};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 2; ++j) data.z(i, j) = z_vals[i][j];

    hp.rho1 = 0.8;
    hp.gamma = 0.7;
    hp.eta = 1.0;  // r = exp(-1) ~ 0.368, r/gamma ~ 0.53
    hp.alpha1 = 1.2;
    hp.alpha2 = 0.9;
    hp.d2 = 0.3;
    hp.sigma2 = 0.6;

    g.atoms = {-0.6, 0.7};
    g.weights = {0.45, 0.55};

    dishes1 = {{-0.6, -0.6}, {0.7, 0.7}};
    dishes2 = {{-0.6, 0.7}, {0.7, -0.6}};
  }

  const std::vector<double>& dish(int s, int d) const {
    return s == 1 ? dishes1[static_cast<std::size_t>(d)] : dishes2[static_cast<std::size_t>(d)];
  }

  std::vector<Config> enumerate() const {
    std::vector<Config> all;
    for (int g1 = 1; g1 <= 2; ++g1)
      for (int s1 = 1; s1 <= 2; ++s1)
        for (int d1 = 0; d1 <= 1; ++d1) {
          for (int g2 = 1; g2 <= 2; ++g2)
            for (int s2 = 1; s2 <= 2; ++s2)
              for (int d2 = 0; d2 <= 1; ++d2)
                all.push_back({g1, s1, d1, g2, s2, d2, false});
          all.push_back({g1, s1, d1, g1, s1, d1, true});
        }
    return all;
  }

  ChainState build_state(const Config& c) const {
    ChainState st;
    st.hp = hp;
    st.g_star = g;
    st.xi.assign(4, 0.0);
    st.chi.assign(2, 0.0);
    FranchiseState& fs = st.franchise;
    fs.p = 2;
    fs.T = 2;
    fs.g.assign(2, 0);
    fs.s.assign(2, 0);
    fs.v.assign(2, -1);
    fs.seat(0, c.g1, c.s1, 0, dish(c.s1, c.d1));
    if (c.shared) {
      fs.seat(1, c.g1, c.s1, 0, {});
    } else if (c.g2 == c.g1 && c.s2 == c.s1) {
      fs.seat(1, c.g2, c.s2, 1, dish(c.s2, c.d2));
    } else {
      fs.seat(1, c.g2, c.s2, 0, dish(c.s2, c.d2));
    }
    return st;
  }

  Config read_config(const ChainState& st) const {
    const FranchiseState& fs = st.franchise;
    Config c;
    c.g1 = fs.g[0];
    c.s1 = fs.s[0];
    c.g2 = fs.g[1];
    c.s2 = fs.s[1];
    c.d1 = dish_id(c.s1, fs.theta(0));
    c.d2 = dish_id(c.s2, fs.theta(1));
    c.shared = (c.g1 == c.g2 && c.s1 == c.s2 && fs.v[0] == fs.v[1]);
    return c;
  }

  int dish_id(int s, const std::vector<double>& d) const {
    const auto& list = s == 1 ? dishes1 : dishes2;
    for (std::size_t k = 0; k < list.size(); ++k)
      if (list[k] == d) return static_cast<int>(k);
    REQUIRE(false);
    return -1;
  }

  // Independent density computation (the brute-force oracle).
  double log_density(const Config& c) const {
    double lp = 0.0;
    // Gaussian likelihood, xi = chi = 0
    const auto col_loglik = [&](int j, const std::vector<double>& dishv) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i) {
        const int t = data.treatments[static_cast<std::size_t>(i)] - 1;
        const double z = data.z(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        s += -0.5 * std::log(2.0 * M_PI * hp.sigma2) -
             0.5 * (z - dishv[static_cast<std::size_t>(t)]) * (z - dishv[static_cast<std::size_t>(t)]) / hp.sigma2;
      }
      return s;
    };
    lp += col_loglik(0, dish(c.s1, c.d1));
    lp += col_loglik(1, dish(c.s2, c.d2));

    // restaurant and cuisine chain
    lp += std::log(c.g1 == 1 ? hp.rho1 : 1.0 - hp.rho1);
    const double r = std::exp(-data.distances[0] / hp.eta);
    const double f1 = c.s1 == 1 ? hp.rho1 + (1.0 - hp.rho1) * r / hp.gamma
                                : hp.rho1 - hp.rho1 * r / hp.gamma;
    lp += std::log(c.g2 == 1 ? f1 : 1.0 - f1);
    const auto q1 = [&](int gi) {
      return gi == 1 ? hp.rho1 + (1.0 - hp.rho1) * hp.gamma : hp.rho1 - hp.rho1 * hp.gamma;
    };
    lp += std::log(c.s1 == 1 ? q1(c.g1) : 1.0 - q1(c.g1));
    lp += std::log(c.s2 == 1 ? q1(c.g2) : 1.0 - q1(c.g2));

    // PYP partition terms
    if (c.shared) {
      const double d = hp.discount(c.s1);
      lp += std::log((1.0 - d) / (1.0 + hp.alpha(c.s1)));
    } else if (c.g1 == c.g2 && c.s1 == c.s2) {
      const double d = hp.discount(c.s1);
      lp += std::log((hp.alpha(c.s1) + d) / (1.0 + hp.alpha(c.s1)));
    }
    // menu probabilities of the table dishes
    const double w2norm = 1.0 - g.weights[0] * g.weights[0] - g.weights[1] * g.weights[1];
    const auto menu = [&](int s, int d) {
      if (s == 1) return std::log(g.weights[static_cast<std::size_t>(d)]);
      const double w_first = d == 0 ? g.weights[0] : g.weights[1];
      const double w_second = d == 0 ? g.weights[1] : g.weights[0];
      return std::log(w_first * w_second / w2norm);
    };
    lp += menu(c.s1, c.d1);
    if (!c.shared) lp += menu(c.s2, c.d2);
    return lp;
  }
};

}  // namespace

TEST_CASE("block1_log_target agrees with the independent density") {
  const Fixture fx;
  const auto configs = fx.enumerate();
  REQUIRE(configs.size() == 72);
  const ChainState ref_state = fx.build_state(configs[0]);
  const double ref_impl = block1_log_target(ref_state, fx.data);
  const double ref_test = fx.log_density(configs[0]);
  for (const Config& c : configs) {
    const ChainState st = fx.build_state(c);
    st.franchise.check_invariants();
    const double impl = block1_log_target(st, fx.data) - ref_impl;
    const double test = fx.log_density(c) - ref_test;
    CHECK(impl == doctest::Approx(test).epsilon(1e-10));
  }
}

TEST_CASE("block1 chain matches brute-force enumeration (scaled-down)") {
  const Fixture fx;
  const auto configs = fx.enumerate();

  // normalized truth
  std::vector<double> logs;
  for (const Config& c : configs) logs.push_back(fx.log_density(c));
  const double z = log_sum_exp(logs);
  std::map<std::string, double> truth;
  for (std::size_t k = 0; k < configs.size(); ++k)
    truth[configs[k].key()] = std::exp(logs[k] - z);

  ChainState state = fx.build_state(configs[0]);
  Rng rng(20260810);
  const int burn = 2000;
  const int sweeps = 60000;
  for (int it = 0; it < burn; ++it) block1_update(state, fx.data, rng);
  std::map<std::string, long> counts;
  for (int it = 0; it < sweeps; ++it) {
    block1_update(state, fx.data, rng);
    state.franchise.check_invariants();
    ++counts[fx.read_config(state).key()];
  }

  double tv = 0.0;
  for (const auto& [key, prob] : truth) {
    const auto it = counts.find(key);
    const double emp = it == counts.end() ? 0.0 : static_cast<double>(it->second) / sweeps;
    tv += std::fabs(emp - prob);
  }
  tv *= 0.5;
  MESSAGE("total variation (60k sweeps): ", tv);
  CHECK(tv < 0.08);
}

TEST_CASE("single-probe moves satisfy detailed balance at stationarity") {
  const Fixture fx;
  ChainState state = fx.build_state(fx.enumerate()[5]);
  Rng rng(777);
  for (int it = 0; it < 2000; ++it) block1_update(state, fx.data, rng);

  // flows through the probe-0 kernel and the probe-1 kernel, tracked apart
  std::map<std::pair<std::string, std::string>, long> flow0, flow1;
  std::string before = fx.read_config(state).key();
  for (int it = 0; it < 60000; ++it) {
    block1_update(state, fx.data, rng, 0, 1);
    std::string mid = fx.read_config(state).key();
    if (mid != before) ++flow0[{before, mid}];
    block1_update(state, fx.data, rng, 1, 2);
    std::string after = fx.read_config(state).key();
    if (after != mid) ++flow1[{mid, after}];
    before = after;
  }

  const auto check_balance = [](const std::map<std::pair<std::string, std::string>, long>& flow) {
    int checked = 0;
    for (const auto& [edge, n_ab] : flow) {
      if (n_ab < 100) continue;
      const auto rev = flow.find({edge.second, edge.first});
      const long n_ba = rev == flow.end() ? 0 : rev->second;
      const double se = std::sqrt(static_cast<double>(n_ab + n_ba));
      CHECK(std::fabs(static_cast<double>(n_ab - n_ba)) < 5.0 * se);
      ++checked;
    }
    CHECK(checked > 3);
  };
  check_balance(flow0);
  check_balance(flow1);
}
