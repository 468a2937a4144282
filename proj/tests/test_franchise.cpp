#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "stickydiff/errors.hpp"
#include "stickydiff/franchise.hpp"
#include "stickydiff/logmath.hpp"

using namespace stickydiff;

TEST_CASE("affinity examples") {
  // the paper's calibration point: average gap 1/499 with eta 0.004 gives ~0.6
  CHECK(affinity(1.0 / 499.0, 0.004) == doctest::Approx(0.6059232179409849).epsilon(1e-12));
  CHECK(affinity(0.37, 0.0) == 0.0);
  CHECK(affinity(1e-12, 0.01) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(affinity(-1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(affinity(0.5, -0.1), std::invalid_argument);
}

TEST_CASE("restaurant probability, Eq.-style substitution") {
  HyperParams hp;
  hp.rho1 = 0.9;
  hp.gamma = 0.9;
  CHECK(restaurant_prob(1, 0.0, hp) == doctest::Approx(0.9));
  CHECK(restaurant_prob(2, 0.0, hp) == doctest::Approx(0.9));
  CHECK(restaurant_prob(1, 0.45, hp) == doctest::Approx(0.95));
  CHECK(restaurant_prob(2, 0.45, hp) == doctest::Approx(0.45));
  CHECK_THROWS_AS(restaurant_prob(1, 0.95, hp), constraint_error);  // r/gamma > 1

  // values stay inside (0,1) whenever r/gamma < 1
  for (double r : {0.0, 0.3, 0.6, 0.89}) {
    for (int s_prev : {1, 2}) {
      const double f = restaurant_prob(s_prev, r, hp);
      CHECK(f > 0.0);
      CHECK(f < 1.0);
    }
  }
}

TEST_CASE("cuisine probability") {
  HyperParams hp;
  hp.rho1 = 0.9;
  hp.gamma = 0.9;
  CHECK(cuisine_prob(1, hp) == doctest::Approx(0.99));
  CHECK(cuisine_prob(2, hp) == doctest::Approx(0.09));
  hp.gamma = 1e-9;
  CHECK(cuisine_prob(1, hp) == doctest::Approx(0.9).epsilon(1e-8));
  CHECK(cuisine_prob(2, hp) == doctest::Approx(0.9).epsilon(1e-8));
}

TEST_CASE("table predictive distribution") {
  SUBCASE("no occupied tables") {
    const auto probs = table_predictive(std::vector<int>{}, 1.0, 0.5);
    REQUIRE(probs.size() == 1);
    CHECK(probs[0] == doctest::Approx(1.0));
  }
  SUBCASE("worked example (3,1), alpha=1, d=0.5") {
    const auto probs = table_predictive(std::vector<int>{3, 1}, 1.0, 0.5);
    REQUIRE(probs.size() == 3);
    CHECK(probs[0] == doctest::Approx(0.5));
    CHECK(probs[1] == doctest::Approx(0.1));
    CHECK(probs[2] == doctest::Approx(0.4));
  }
  SUBCASE("Polya urn at d=0") {
    const auto probs = table_predictive(std::vector<int>{3, 1}, 1.0, 0.0);
    CHECK(probs[0] == doctest::Approx(3.0 / 5.0));
    CHECK(probs[1] == doctest::Approx(1.0 / 5.0));
    CHECK(probs[2] == doctest::Approx(1.0 / 5.0));
  }
  SUBCASE("normalizer equals total count plus alpha") {
    const std::vector<int> occ{4, 2, 7, 1};
    const double alpha = 2.3, d = 0.4;
    const auto probs = table_predictive(occ, alpha, d);
    double total = 0.0;
    for (double q : probs) total += q;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    // unnormalized masses recover (sum counts + alpha)
    CHECK((4.0 - d) / probs[0] == doctest::Approx(14.0 + alpha).epsilon(1e-12));
  }
  CHECK_THROWS_AS(table_predictive(std::vector<int>{0}, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("sample_dish menu support conditions") {
  Rng rng(123);
  BaseMeasureG g;
  g.atoms = {0.3, -1.2, 0.9};
  g.weights = {0.5, 0.3, 0.2};
  for (int rep = 0; rep < 200; ++rep) {
    const auto d1 = sample_dish(1, g, 4, rng);
    CHECK(all_equal(d1));
    const auto d2 = sample_dish(2, g, 4, rng);
    CHECK(!all_equal(d2));
  }
  BaseMeasureG single;
  single.atoms = {0.3};
  single.weights = {1.0};
  CHECK_THROWS_AS(sample_dish(2, single, 3, rng), constraint_error);
}

TEST_CASE("W2 two-atom enumeration: P((a,b)) = 0.5 conditioned on not-all-equal") {
  // enumeration oracle: outcomes (a,a) 0.09, (a,b) 0.21, (b,a) 0.21, (b,b) 0.49;
  // conditioning on unequal gives 0.21/0.42 = 0.5 for the ordered pair (a,b)
  Rng rng(77);
  BaseMeasureG g;
  g.atoms = {1.0, 2.0};
  g.weights = {0.3, 0.7};
  int count_ab = 0;
  const int n = 40000;
  for (int rep = 0; rep < n; ++rep) {
    const auto dish = sample_dish(2, g, 2, rng);
    if (dish[0] == 1.0 && dish[1] == 2.0) ++count_ab;
  }
  const double freq = static_cast<double>(count_ab) / n;
  const double se = std::sqrt(0.25 / n);
  CHECK(std::fabs(freq - 0.5) < 4.0 * se);
}

TEST_CASE("simulate_franchise zero-order restaurant frequency") {
  HyperParams hp;
  hp.rho1 = 0.82;
  hp.gamma = 0.6;
  hp.eta = 0.0;
  hp.alpha1 = 5.0;
  hp.alpha2 = 3.0;
  hp.d2 = 0.2;
  Rng rng(2024);
  BaseMeasureG g = stick_breaking_realization(10.0, 0.0, 1.0, 40, rng);
  const int p = 10000;
  std::vector<double> dist(static_cast<std::size_t>(p - 1), 1.0 / (p - 1));
  const FranchiseState fs = simulate_franchise(p, dist, hp, g, 3, rng);
  fs.check_invariants();
  double frac1 = 0.0;
  for (auto gi : fs.g) frac1 += gi == 1 ? 1.0 : 0.0;
  frac1 /= p;
  const double se = std::sqrt(0.82 * 0.18 / p);
  CHECK(std::fabs(frac1 - 0.82) < 3.5 * se);

  // theta has all-equal elements iff s == 1
  for (int j = 0; j < p; ++j)
    CHECK(all_equal(fs.theta(j)) == (fs.s[static_cast<std::size_t>(j)] == 1));
}

TEST_CASE("single-probe franchise") {
  HyperParams hp;
  hp.rho1 = 0.75;
  hp.gamma = 0.5;
  Rng rng(5);
  BaseMeasureG g = stick_breaking_realization(5.0, 0.0, 1.0, 20, rng);
  int count1 = 0;
  const int reps = 20000;
  for (int rep = 0; rep < reps; ++rep) {
    const FranchiseState fs = simulate_franchise(1, {}, hp, g, 2, rng);
    if (fs.g[0] == 1) ++count1;
  }
  const double se = std::sqrt(0.75 * 0.25 / reps);
  CHECK(std::fabs(static_cast<double>(count1) / reps - 0.75) < 3.5 * se);
}

TEST_CASE("cuisine autocorrelation decreases as distances stretch") {
  // Monte-Carlo ordering over three distance scales with eta fixed
  HyperParams hp;
  hp.rho1 = 0.8;
  hp.gamma = 0.8;
  hp.eta = 0.004;
  const int p = 400;
  Rng rng(31);
  const auto mean_lag1 = [&](double scale) {
    std::vector<double> dist(static_cast<std::size_t>(p - 1), scale / (p - 1));
    double acc = 0.0;
    const int reps = 60;
    for (int rep = 0; rep < reps; ++rep) {
      BaseMeasureG g = stick_breaking_realization(10.0, 0.0, 1.0, 40, rng);
      const FranchiseState fs = simulate_franchise(p, dist, hp, g, 3, rng);
      std::vector<double> s_real(fs.s.begin(), fs.s.end());
      acc += lag1_autocorr(s_real);
    }
    return acc / reps;
  };
  const double r_small = mean_lag1(1.0);
  const double r_mid = mean_lag1(2.0);
  const double r_large = mean_lag1(4.0);
  CHECK(r_small > 0.05);          // positive dependence at the base scale
  CHECK(r_small > r_mid);
  CHECK(r_mid > r_large);
}

TEST_CASE("cluster extraction bounds") {
  HyperParams hp;
  hp.rho1 = 0.8;
  hp.gamma = 0.7;
  hp.alpha1 = 2.0;
  hp.alpha2 = 2.0;
  Rng rng(99);
  BaseMeasureG g = stick_breaking_realization(3.0, 0.0, 1.0, 30, rng);
  const int p = 300;
  std::vector<double> dist(static_cast<std::size_t>(p - 1), 1.0 / (p - 1));
  const FranchiseState fs = simulate_franchise(p, dist, hp, g, 3, rng);
  const ClusterSet cs = extract_clusters(fs);
  CHECK(static_cast<int>(cs.size()) <= fs.total_tables());
  CHECK(fs.total_tables() <= p);
  CHECK(cs.size() >= 1);
  // allocations consistent with dishes
  for (int j = 0; j < p; ++j)
    CHECK(cs.dishes[static_cast<std::size_t>(cs.allocation[static_cast<std::size_t>(j)])] == fs.theta(j));
  // table counts sum to the number of occupied tables
  int total_refs = 0;
  for (int c : cs.table_count) total_refs += c;
  CHECK(total_refs == fs.total_tables());
}

TEST_CASE("hyperparameter validation") {
  HyperParams hp;
  hp.rho1 = 0.4;
  CHECK_THROWS_AS(hp.validate(), validation_error);
  hp = HyperParams{};
  hp.eta = 100.0;  // above -1/log(gamma) for gamma = 0.9
  CHECK_THROWS_AS(hp.validate(), validation_error);
  hp = HyperParams{};
  hp.eta = 0.5 * hp.eta_slab_width();
  CHECK_NOTHROW(hp.validate());
}
