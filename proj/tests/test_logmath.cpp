#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "stickydiff/logmath.hpp"

using namespace stickydiff;

TEST_CASE("log_add and log_sub agree with direct evaluation") {
  CHECK(log_add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)).epsilon(1e-14));
  CHECK(log_add(neg_inf, std::log(3.0)) == doctest::Approx(std::log(3.0)));
  CHECK(log_sub(std::log(5.0), std::log(3.0)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(log_sub(std::log(3.0), std::log(3.0)) == neg_inf);
  CHECK(log_sub(std::log(3.0), neg_inf) == doctest::Approx(std::log(3.0)));
}

TEST_CASE("log_sum_exp handles spread-out magnitudes") {
  std::vector<double> v{-1000.0, -1001.0, -999.0};
  const double expect = -999.0 + std::log(1.0 + std::exp(-1.0) + std::exp(-2.0));
  CHECK(log_sum_exp(v) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(log_sum_exp(std::vector<double>{}) == neg_inf);
}

TEST_CASE("log_rising matches direct products") {
  CHECK(log_rising(3.5, 0) == 0.0);
  CHECK(log_rising(3.5, 1) == doctest::Approx(std::log(3.5)));
  CHECK(log_rising(2.0, 4) == doctest::Approx(std::log(2.0 * 3.0 * 4.0 * 5.0)).epsilon(1e-13));
  CHECK(log_rising(0.7, 12) ==
        doctest::Approx(std::lgamma(12.7) - std::lgamma(0.7)).epsilon(1e-12));
}

namespace {

// brute-force partition probability by summing sequential seating products
// over all arrival constructions of the partition (oracle for the EPPF)
double seq_probability(const std::vector<int>& labels, double alpha, double d) {
  // labels: block index per item in arrival order
  double lp = 0.0;
  std::vector<int> sizes;
  int total = 0;
  for (int b : labels) {
    if (b == static_cast<int>(sizes.size())) {
      lp += std::log((alpha + d * static_cast<double>(sizes.size())) / (total + alpha));
      sizes.push_back(1);
    } else {
      lp += std::log((static_cast<double>(sizes[static_cast<std::size_t>(b)]) - d) / (total + alpha));
      ++sizes[static_cast<std::size_t>(b)];
    }
    ++total;
  }
  return lp;
}

}  // namespace

TEST_CASE("PYP EPPF equals the sequential seating probability") {
  const double alpha = 1.7, d = 0.3;
  // partition {1,3},{2},{4,5,6} arriving as labels 0,1,0,2,2,2
  const std::vector<int> labels{0, 1, 0, 2, 2, 2};
  const std::vector<int> sizes{2, 1, 3};
  CHECK(log_pyp_eppf(sizes, alpha, d) ==
        doctest::Approx(seq_probability(labels, alpha, d)).epsilon(1e-12));

  // exchangeability: a different arrival order of the same block sizes
  const std::vector<int> labels2{0, 0, 1, 2, 2, 2};
  CHECK(seq_probability(labels, alpha, d) ==
        doctest::Approx(seq_probability(labels2, alpha, d)).epsilon(1e-12));

  // Dirichlet-process special case d = 0
  const std::vector<int> labels3{0, 0, 1, 0};
  const std::vector<int> sizes3{3, 1};
  CHECK(log_pyp_eppf(sizes3, 2.5, 0.0) ==
        doctest::Approx(seq_probability(labels3, 2.5, 0.0)).epsilon(1e-12));
}

TEST_CASE("EPPF sums to one over all partitions of four items") {
  // enumerate set partitions of {0,1,2,3} via restricted growth strings
  const double alpha = 0.9, d = 0.25;
  double total = 0.0;
  std::vector<int> rgs(4, 0);
  const auto size_of = [&](const std::vector<int>& labels) {
    std::vector<int> sizes;
    for (int b : labels) {
      if (b == static_cast<int>(sizes.size()))
        sizes.push_back(1);
      else
        ++sizes[static_cast<std::size_t>(b)];
    }
    return sizes;
  };
  // generate restricted growth strings recursively
  const std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_label) {
    if (i == rgs.size()) {
      total += std::exp(log_pyp_eppf(size_of(rgs), alpha, d));
      return;
    }
    for (int b = 0; b <= max_label + 1; ++b) {
      rgs[i] = b;
      rec(i + 1, std::max(max_label, b));
    }
  };
  rec(1, 0);  // rgs[0] = 0 fixed
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lag1 autocorrelation basics") {
  std::vector<double> alt{1, -1, 1, -1, 1, -1, 1, -1};
  CHECK(lag1_autocorr(alt) < -0.8);
  std::vector<double> flat{2, 2, 2, 2};
  CHECK(lag1_autocorr(flat) == 0.0);
}
