#include <doctest.h>

#include <cmath>

#include "stickydiff/errors.hpp"
#include "stickydiff/evaluation.hpp"
#include "stickydiff/rng.hpp"

using namespace stickydiff;

TEST_CASE("roc worked examples") {
  SUBCASE("perfect separation passes through (0,1)") {
    const auto pts = roc_points({0.9, 0.8, 0.2, 0.1}, {true, true, false, false});
    bool corner = false;
    for (const auto& [fpr, tpr] : pts) corner = corner || (fpr == 0.0 && tpr == 1.0);
    CHECK(corner);
    CHECK(auc(pts) == doctest::Approx(1.0));
    CHECK(auc_partial(pts, 0.2) == doctest::Approx(1.0));
    CHECK(auc_partial(pts, 0.1) == doctest::Approx(1.0));
  }
  SUBCASE("constant scores collapse to the diagonal") {
    const auto pts = roc_points({0.5, 0.5, 0.5, 0.5}, {true, false, true, false});
    REQUIRE(pts.size() == 2);
    CHECK(pts.front() == std::pair<double, double>{0.0, 0.0});
    CHECK(pts.back() == std::pair<double, double>{1.0, 1.0});
    CHECK(auc(pts) == doctest::Approx(0.5));
  }
  SUBCASE("reversed perfect scores give zero area") {
    const auto pts = roc_points({0.1, 0.2, 0.8, 0.9}, {true, true, false, false});
    CHECK(auc(pts) == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS(roc_points({0.1, 0.2}, {true, true}), validation_error);
}

TEST_CASE("random scores give AUC about one half") {
  Rng rng(17);
  const int p = 10000;
  std::vector<double> scores(p);
  std::vector<bool> truth(p);
  for (int j = 0; j < p; ++j) {
    scores[static_cast<std::size_t>(j)] = rng.uniform();
    truth[static_cast<std::size_t>(j)] = rng.uniform() < 0.3;
  }
  const auto pts = roc_points(scores, truth);
  CHECK(std::fabs(auc(pts) - 0.5) < 0.03);
}

TEST_CASE("AUC invariance under strictly increasing transforms") {
  Rng rng(18);
  std::vector<double> scores(200);
  std::vector<bool> truth(200);
  for (std::size_t j = 0; j < 200; ++j) {
    scores[j] = rng.normal();
    truth[j] = rng.uniform() < 0.4;
  }
  std::vector<double> warped(200);
  for (std::size_t j = 0; j < 200; ++j) warped[j] = std::exp(2.0 * scores[j]) + 1.0;
  const auto p0 = roc_points(scores, truth);
  const auto p1 = roc_points(warped, truth);
  CHECK(auc(p0) == doctest::Approx(auc(p1)).epsilon(1e-12));
  CHECK(auc_partial(p0, 0.2) == doctest::Approx(auc_partial(p1, 0.2)).epsilon(1e-12));
}

TEST_CASE("partial AUC with cap 1 equals the full area") {
  Rng rng(19);
  std::vector<double> scores(300);
  std::vector<bool> truth(300);
  for (std::size_t j = 0; j < 300; ++j) {
    scores[j] = rng.normal() + (rng.uniform() < 0.5 ? 0.8 : 0.0);
    truth[j] = j % 3 == 0;
  }
  const auto pts = roc_points(scores, truth);
  CHECK(auc_partial(pts, 1.0) == doctest::Approx(auc(pts)).epsilon(1e-12));
  CHECK(auc_partial(pts, 0.1) >= 0.0);
  CHECK(auc_partial(pts, 0.1) <= 1.0);
}

TEST_CASE("achieved FDR") {
  CHECK(achieved_fdr({true, true, false}, {true, true, true}) == 0.0);
  CHECK(achieved_fdr({true, true, true, true, true, true, true, true, true, true},
                     {false, true, true, true, true, true, true, true, true, true}) ==
        doctest::Approx(0.1));
  CHECK(achieved_fdr({false, false}, {true, false}) == 0.0);  // nothing called
  Rng rng(20);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<bool> called(50), truth(50);
    for (std::size_t j = 0; j < 50; ++j) {
      called[j] = rng.uniform() < 0.5;
      truth[j] = rng.uniform() < 0.5;
    }
    const double f = achieved_fdr(called, truth);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
}
