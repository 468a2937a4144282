#include <doctest.h>

#include <cmath>
#include <vector>

#include "stickydiff/data_model.hpp"
#include "stickydiff/logmath.hpp"
#include "stickydiff/simgen.hpp"

using namespace stickydiff;

TEST_CASE("methylation-state chain hits its stationary law at long range") {
  Rng rng(404);
  // distances large relative to kappa: self-transition ~ 0, the cycle turns
  // every step and state frequencies approach uniform
  const int p = 40000;
  std::vector<double> dist(static_cast<std::size_t>(p - 1), 1.0 / (p - 1));
  const auto h = generate_methylation_states(p, dist, 1e-6, rng);
  std::vector<int> counts(4, 0);
  for (int s : h) {
    REQUIRE(s >= 1);
    REQUIRE(s <= 4);
    ++counts[static_cast<std::size_t>(s - 1)];
  }
  for (int c : counts)
    CHECK(std::fabs(static_cast<double>(c) / p - 0.25) < 0.02);
}

TEST_CASE("methylation-state chain freezes when distances vanish") {
  // stay probability exp(-e/kappa) with e/kappa = 1e-4 over 100 steps:
  // P(constant path) ~ exp(-100 * 1e-4) ~ 0.99
  Rng rng(405);
  const int p = 100;
  int constant_paths = 0;
  const int reps = 400;
  std::vector<double> dist(static_cast<std::size_t>(p - 1), 1e-8);
  for (int rep = 0; rep < reps; ++rep) {
    const auto h = generate_methylation_states(p, dist, 1e-4, rng);
    bool constant = true;
    for (int s : h) constant = constant && (s == h[0]);
    constant_paths += constant ? 1 : 0;
  }
  CHECK(static_cast<double>(constant_paths) / reps > 0.95);
}

TEST_CASE("single-probe state is a stationary draw") {
  Rng rng(406);
  std::vector<int> counts(4, 0);
  for (int rep = 0; rep < 8000; ++rep) {
    const auto h = generate_methylation_states(1, {}, 0.004, rng);
    ++counts[static_cast<std::size_t>(h[0] - 1)];
  }
  for (int c : counts) CHECK(std::fabs(c / 8000.0 - 0.25) < 0.025);
}

TEST_CASE("generated datasets honor the paper's design") {
  SimConfig cfg;
  cfg.p = 300;
  cfg.T = 5;
  cfg.n_per_treatment = 4;
  cfg.sigma2_0 = 0.36;
  cfg.eta_0 = 0.004;
  cfg.seed = 1;

  // Table values accepted verbatim
  CHECK(cfg.hp_true.alpha1 == 20.0);
  CHECK(cfg.hp_true.alpha2 == 20.0);
  CHECK(cfg.hp_true.d2 == 0.33);
  CHECK(cfg.hp_true.beta_mass == 20.0);
  CHECK(cfg.hp_true.gamma == 0.9);
  CHECK(cfg.hp_true.rho1 == doctest::Approx(0.9));  // rho2 = 0.1
  CHECK(cfg.hp_true.mu_G == 0.0);
  CHECK(cfg.hp_true.tau_G2 == 1.0);
  CHECK(cfg.tau_chi2 == 0.1225);

  double frac_diff_acc = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    cfg.seed = 1000 + static_cast<std::uint64_t>(rep);
    auto [data, truth] = generate_dataset(cfg);
    data.validate();
    int n_diff = 0;
    for (std::size_t j = 0; j < truth.s_true.size(); ++j) {
      const int s = truth.s_true[j];
      // s_true = 2 iff theta row has at least two distinct elements
      bool eq = true;
      for (int t = 1; t < cfg.T; ++t)
        eq = eq && truth.theta_true(j, static_cast<std::size_t>(t)) == truth.theta_true(j, 0);
      CHECK((s == 2) == !eq);
      n_diff += s == 2 ? 1 : 0;
    }
    frac_diff_acc += static_cast<double>(n_diff) / cfg.p;
    for (double x : data.values.data()) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
  }
  // rho2 = 0.1 -> about 10% differential probes over 20 replicates
  CHECK(std::fabs(frac_diff_acc / 20.0 - 0.10) < 0.04);
}

TEST_CASE("determinism given the seed") {
  SimConfig cfg;
  cfg.p = 50;
  cfg.T = 3;
  cfg.n_per_treatment = 2;
  cfg.seed = 99;
  auto [d1, t1] = generate_dataset(cfg);
  auto [d2, t2] = generate_dataset(cfg);
  CHECK(d1.values.data() == d2.values.data());
  CHECK(d1.positions == d2.positions);
  CHECK(t1.s_true == t2.s_true);
  CHECK(t1.chi_true == t2.chi_true);
}

TEST_CASE("differential-state autocorrelation: zero vs positive dependence") {
  SimConfig cfg;
  cfg.p = 300;
  cfg.T = 5;
  cfg.n_per_treatment = 4;

  const auto mean_lag1 = [&](double eta0, std::uint64_t base_seed) {
    double acc = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      SimConfig c = cfg;
      c.eta_0 = eta0;
      c.hp_true.eta = eta0;
      c.seed = base_seed + static_cast<std::uint64_t>(rep);
      auto [data, truth] = generate_dataset(c);
      std::vector<double> s_real(truth.s_true.begin(), truth.s_true.end());
      acc += lag1_autocorr(s_real);
    }
    return acc / 20.0;
  };

  const double r_independent = mean_lag1(0.0, 7000);
  const double r_correlated = mean_lag1(0.004, 8000);
  // crude 3-sigma scale for a lag-1 autocorrelation of ~p iid draws,
  // averaged over 20 replicates
  const double se = 1.0 / std::sqrt(static_cast<double>(cfg.p) * 20.0);
  CHECK(std::fabs(r_independent) < 3.0 * se);
  CHECK(r_correlated > 3.0 * se);
}

TEST_CASE("signal-to-noise levels bracket the paper's R0^2 figures") {
  // R0^2 = var(signal) / (var(signal) + sigma2). The generator's signal
  // variance (chi + theta on the logit scale) is around 1 with the Table
  // values, so sigma2 = 0.36 should land near 70% and sigma2 = 1 near 40%.
  SimConfig cfg;
  cfg.p = 400;
  cfg.T = 5;
  cfg.n_per_treatment = 4;
  cfg.seed = 31415;
  auto [data, truth] = generate_dataset(cfg);
  double var_signal = 0.0, mean_signal = 0.0;
  std::vector<double> signal;
  for (int j = 0; j < cfg.p; ++j)
    for (int t = 0; t < cfg.T; ++t)
      signal.push_back(truth.chi_true[static_cast<std::size_t>(j)] +
                       truth.theta_true(static_cast<std::size_t>(j), static_cast<std::size_t>(t)));
  for (double s : signal) mean_signal += s;
  mean_signal /= static_cast<double>(signal.size());
  for (double s : signal) var_signal += (s - mean_signal) * (s - mean_signal);
  var_signal /= static_cast<double>(signal.size() - 1);

  const double r2_low_noise = var_signal / (var_signal + 0.36);
  const double r2_high_noise = var_signal / (var_signal + 1.0);
  CHECK(r2_low_noise > 0.55);
  CHECK(r2_low_noise < 0.9);
  CHECK(r2_high_noise > 0.35);
  CHECK(r2_high_noise < 0.75);
  CHECK(r2_low_noise > r2_high_noise);
}
