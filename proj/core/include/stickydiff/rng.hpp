#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace stickydiff {

// Deterministic random generator used across the project. All variate
// algorithms are fixed here (not delegated to std:: distributions) so that
// runs with equal seeds produce identical streams regardless of the
// standard-library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Derives an independent stream for a sub-task (replicate, chain, ...).
  Rng derive(std::uint64_t salt) const;

  double uniform();                    // (0,1)
  double uniform(double lo, double hi);
  double normal();                     // standard normal
  double normal(double mean, double sd);
  double gamma(double shape, double rate);
  double inverse_gamma(double shape, double rate);
  double beta(double a, double b);
  int poisson(double mean);
  int binomial(int n, double prob);
  bool bernoulli(double prob);

  // Index sampled proportionally to weights (linear) or exp(logw) (log scale).
  std::size_t categorical(std::span<const double> weights);
  std::size_t categorical_log(std::span<const double> logw);

  std::uint64_t next_u64();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace stickydiff
