#include "stickydiff/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "stickydiff/logmath.hpp"

namespace stickydiff {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::derive(std::uint64_t salt) const {
  std::mt19937_64 probe = engine_;  // do not disturb this stream
  const std::uint64_t base = probe();
  return Rng(splitmix64(base ^ splitmix64(salt)));
}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform() {
  // 53-bit mantissa in (0,1); never returns an exact endpoint.
  const std::uint64_t r = engine_() >> 11;
  double u = (static_cast<double>(r) + 0.5) * (1.0 / 9007199254740992.0);
  return u;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // Marsaglia polar method
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v * f;
  has_cached_normal_ = true;
  return u * f;
}

double Rng::normal(double mean, double sd) { return mean + sd * normal(); }

double Rng::gamma(double shape, double rate) {
  if (shape <= 0.0 || rate <= 0.0) throw std::invalid_argument("gamma: shape and rate must be positive");
  if (shape < 1.0) {
    // Boost via Gamma(shape+1) * U^(1/shape)
    const double g = gamma(shape + 1.0, 1.0);
    const double u = uniform();
    return g * std::pow(u, 1.0 / shape) / rate;
  }
  // Marsaglia-Tsang squeeze
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double Rng::inverse_gamma(double shape, double rate) {
  return rate / gamma(shape, 1.0);
}

double Rng::beta(double a, double b) {
  const double x = gamma(a, 1.0);
  const double y = gamma(b, 1.0);
  return x / (x + y);
}

int Rng::poisson(double mean) {
  if (mean < 0.0) throw std::invalid_argument("poisson: mean must be >= 0");
  if (mean == 0.0) return 0;
  if (mean < 60.0) {
    // inversion by sequential search
    const double l = std::exp(-mean);
    double p = 1.0;
    int k = 0;
    do {
      ++k;
      p *= uniform();
    } while (p > l);
    return k - 1;
  }
  // split large means to stay in inversion's safe range
  const int half = poisson(mean / 2.0);
  return half + poisson(mean - mean / 2.0);
}

int Rng::binomial(int n, double prob) {
  if (n < 0 || prob < 0.0 || prob > 1.0) throw std::invalid_argument("binomial: bad arguments");
  int k = 0;
  for (int i = 0; i < n; ++i)
    if (uniform() < prob) ++k;
  return k;
}

bool Rng::bernoulli(double prob) { return uniform() < prob; }

std::size_t Rng::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw std::invalid_argument("categorical: weights must have positive sum");
  double u = uniform() * total;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    u -= weights[i];
    if (u <= 0.0) return i;
  }
  return weights.size() - 1;
}

std::size_t Rng::categorical_log(std::span<const double> logw) {
  const double z = log_sum_exp(logw);
  if (z == neg_inf) throw std::invalid_argument("categorical_log: all weights are zero");
  double u = uniform();
  for (std::size_t i = 0; i + 1 < logw.size(); ++i) {
    u -= std::exp(logw[i] - z);
    if (u <= 0.0) return i;
  }
  return logw.size() - 1;
}

}  // namespace stickydiff
