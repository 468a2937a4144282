#include <doctest.h>

#include "stickydiff/detection.hpp"
#include "stickydiff/errors.hpp"
#include "stickydiff/rng.hpp"

using namespace stickydiff;

TEST_CASE("estimate_diff_prob counts differential draws") {
  std::vector<std::vector<std::uint8_t>> draws;
  for (int k = 0; k < 100; ++k) draws.push_back({static_cast<std::uint8_t>(k < 30 ? 2 : 1), 2});
  const auto omega = estimate_diff_prob(draws);
  CHECK(omega[0] == doctest::Approx(0.3));
  CHECK(omega[1] == doctest::Approx(1.0));

  const auto single = estimate_diff_prob({{1, 2}});
  CHECK(single[0] == 0.0);
  CHECK(single[1] == 1.0);
  CHECK_THROWS_AS(estimate_diff_prob({}), validation_error);
}

TEST_CASE("fdr_call worked example from the ranking rule") {
  // omega (0.9, 0.8, 0.4), q0 = 0.2: FDR path (0.1, 0.15, 0.3) -> b* = 2
  const FdrResult res = fdr_call({0.9, 0.8, 0.4}, 0.2);
  CHECK(res.b_star == 2);
  CHECK(res.called == std::vector<bool>{true, true, false});
  CHECK(res.expected_fdr_path[0] == doctest::Approx(0.1));
  CHECK(res.expected_fdr_path[1] == doctest::Approx(0.15));
  CHECK(res.expected_fdr_path[2] == doctest::Approx(0.3));
}

TEST_CASE("fdr_call edge cases") {
  const FdrResult all_sure = fdr_call({1.0, 1.0, 1.0}, 0.05);
  CHECK(all_sure.b_star == 3);
  for (bool c : all_sure.called) CHECK(c);
  for (double f : all_sure.expected_fdr_path) CHECK(f == 0.0);

  const FdrResult none = fdr_call({0.5}, 0.05);
  CHECK(none.b_star == 0);
  CHECK_FALSE(none.called[0]);
}

TEST_CASE("fdr_call scans the whole path for the largest qualifying b") {
  // sorted omega: 1.0 then 0.7 -> path (0.0, 0.15); the largest b below
  // q0 = 0.2 is 2, so both probes are called
  const FdrResult res = fdr_call({0.7, 1.0}, 0.2);
  CHECK(res.expected_fdr_path[0] == doctest::Approx(0.0));
  CHECK(res.expected_fdr_path[1] == doctest::Approx(0.15));
  CHECK(res.b_star == 2);
  CHECK(res.called == std::vector<bool>{true, true});
}

TEST_CASE("fdr_call tie-break by probe index and q0 monotonicity") {
  // sorted: probes 1,2 (0.9), then the tie group 0,3 (0.8); the cut lands
  // inside the tie group and ascending probe index wins
  const FdrResult res = fdr_call({0.8, 0.9, 0.9, 0.8}, 0.14);
  CHECK(res.expected_fdr_path[2] == doctest::Approx(0.4 / 3.0));
  CHECK(res.b_star == 3);
  CHECK(res.called == std::vector<bool>{true, true, true, false});

  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> omega(20);
    for (double& w : omega) w = rng.uniform();
    int prev = 0;
    for (double q0 : {0.02, 0.05, 0.1, 0.2, 0.4, 0.8}) {
      const FdrResult r = fdr_call(omega, q0);
      CHECK(r.b_star >= prev);
      prev = r.b_star;
      // called omegas dominate uncalled ones
      double min_called = 2.0, max_uncalled = -1.0;
      for (std::size_t j = 0; j < omega.size(); ++j) {
        if (r.called[j])
          min_called = std::min(min_called, omega[j]);
        else
          max_uncalled = std::max(max_uncalled, omega[j]);
      }
      if (r.b_star > 0 && r.b_star < 20) CHECK(min_called >= max_uncalled);
    }
  }
}

TEST_CASE("fdr_call ignores probe relabeling") {
  std::vector<double> omega{0.95, 0.2, 0.7, 0.85, 0.1};
  const FdrResult base = fdr_call(omega, 0.2);
  // reversing the probe order permutes the calls identically
  std::vector<double> rev(omega.rbegin(), omega.rend());
  const FdrResult flipped = fdr_call(rev, 0.2);
  CHECK(base.b_star == flipped.b_star);
  for (std::size_t j = 0; j < omega.size(); ++j)
    CHECK(base.called[j] == flipped.called[omega.size() - 1 - j]);
}

TEST_CASE("pairwise differences") {
  Matrix theta(3, 4);
  // probe 0: means (0, 0.2, 0.9, 0.1) -> pair (3,1) with difference 0.9
  theta(0, 0) = 0.0; theta(0, 1) = 0.2; theta(0, 2) = 0.9; theta(0, 3) = 0.1;
  // probe 1: all equal -> zero difference, lowest-index pair
  theta(1, 0) = theta(1, 1) = theta(1, 2) = theta(1, 3) = 0.5;
  // probe 2: two-group style (1.0, -1.0, 0, 0)
  theta(2, 0) = 1.0; theta(2, 1) = -1.0; theta(2, 2) = 0.0; theta(2, 3) = 0.0;

  const auto recs = pairwise_differences(theta, {true, true, true});
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].t_high == 3);
  CHECK(recs[0].t_low == 1);
  CHECK(recs[0].difference == doctest::Approx(0.9));
  CHECK(recs[1].difference == 0.0);
  CHECK(recs[1].t_high == 1);
  CHECK(recs[1].t_low == 2);
  CHECK(recs[2].t_high == 1);
  CHECK(recs[2].t_low == 2);
  CHECK(recs[2].difference == doctest::Approx(2.0));

  const auto none = pairwise_differences(theta, {false, true, false});
  REQUIRE(none.size() == 1);
  CHECK(none[0].probe == 1);
}

TEST_CASE("summary invariants") {
  std::vector<std::vector<std::uint8_t>> draws;
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    std::vector<std::uint8_t> s(6);
    for (std::size_t j = 0; j < 6; ++j) s[j] = rng.uniform() < 0.2 + 0.1 * static_cast<double>(j) ? 2 : 1;
    draws.push_back(s);
  }
  Matrix theta(6, 3);
  const PosteriorSummary ps = summarize_posterior(draws, theta, 0.3);
  int called = 0;
  for (bool c : ps.called) called += c ? 1 : 0;
  CHECK(called == ps.b_star);
  CHECK(ps.pairwise.size() == static_cast<std::size_t>(ps.b_star));
}
