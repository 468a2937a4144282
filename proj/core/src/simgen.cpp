#include "stickydiff/simgen.hpp"

#include <cmath>

#include "stickydiff/errors.hpp"

namespace stickydiff {

void SimConfig::validate() const {
  if (p < 1) throw validation_error("sim config: p must be >= 1");
  if (T < 2) throw validation_error("sim config: T must be >= 2");
  if (n_per_treatment < 1) throw validation_error("sim config: n_per_treatment must be >= 1");
  if (!(sigma2_0 > 0.0)) throw validation_error("sim config: sigma2_0 must be positive");
  if (eta_0 < 0.0) throw validation_error("sim config: eta_0 must be non-negative");
  if (!(baseline_demethylated < baseline_transit && baseline_transit < baseline_methylated))
    throw validation_error("sim config: baseline levels must be ordered demethylated < transit < methylated");
  if (!(baseline_demethylated > 0.0 && baseline_methylated < 1.0))
    throw validation_error("sim config: baseline levels must lie in (0,1)");
  if (!(tau_chi2 > 0.0)) throw validation_error("sim config: tau_chi2 must be positive");
  if (!(read_depth_mean > 0.0)) throw validation_error("sim config: read_depth_mean must be positive");
  if (!(hmm_kappa > 0.0)) throw validation_error("sim config: hmm_kappa must be positive");
  if (truncation_L < 2) throw validation_error("sim config: truncation_L must be >= 2");
  if (distance_source == DistanceSource::explicit_gaps &&
      static_cast<int>(gaps_bp.size()) != p - 1)
    throw validation_error("sim config: explicit gaps must have length p-1");
  if (distance_source == DistanceSource::log_uniform &&
      !(gap_min_bp >= 1 && gap_max_bp > gap_min_bp))
    throw validation_error("sim config: bad log-uniform gap range");
  HyperParams hp = hp_true;
  hp.eta = eta_0;
  hp.validate();
}

std::vector<long long> bundled_interprobe_gaps() {
  static const long long gaps[] = {
#include "interprobe_gaps.inc"
  };
  return std::vector<long long>(std::begin(gaps), std::end(gaps));
}

std::vector<int> generate_methylation_states(int p, std::span<const double> distances,
                                             double kappa, Rng& rng) {
  if (p < 1) throw validation_error("methylation states: p must be >= 1");
  if (p > 1 && static_cast<int>(distances.size()) != p - 1)
    throw validation_error("methylation states: need p-1 distances");
  // cycle methylated(1) -> transit(2) -> demethylated(3) -> transit(4) -> 1
  static const int next_state[4] = {2, 3, 4, 1};
  std::vector<int> h(static_cast<std::size_t>(p));
  h[0] = 1 + static_cast<int>(rng.uniform() * 4.0);
  if (h[0] > 4) h[0] = 4;
  for (int j = 1; j < p; ++j) {
    const double stay = std::exp(-distances[static_cast<std::size_t>(j - 1)] / kappa);
    const int prev = h[static_cast<std::size_t>(j - 1)];
    h[static_cast<std::size_t>(j)] = rng.bernoulli(stay) ? prev : next_state[prev - 1];
  }
  return h;
}

namespace {

std::vector<long long> draw_gaps(const SimConfig& cfg, Rng& rng) {
  const std::size_t count = static_cast<std::size_t>(cfg.p - 1);
  std::vector<long long> gaps(count);
  switch (cfg.distance_source) {
    case DistanceSource::explicit_gaps:
      return cfg.gaps_bp;
    case DistanceSource::bundled: {
      const std::vector<long long> pool = bundled_interprobe_gaps();
      for (std::size_t k = 0; k < count; ++k) {
        std::size_t idx = static_cast<std::size_t>(rng.uniform() * static_cast<double>(pool.size()));
        if (idx >= pool.size()) idx = pool.size() - 1;
        gaps[k] = pool[idx];
      }
      return gaps;
    }
    case DistanceSource::log_uniform: {
      const double lo = std::log(static_cast<double>(cfg.gap_min_bp));
      const double hi = std::log(static_cast<double>(cfg.gap_max_bp));
      for (std::size_t k = 0; k < count; ++k) {
        const long long g = static_cast<long long>(std::llround(std::exp(rng.uniform(lo, hi))));
        gaps[k] = std::max<long long>(1, g);
      }
      return gaps;
    }
  }
  return gaps;
}

}  // namespace

std::pair<Dataset, SimTruth> generate_dataset(const SimConfig& cfg, Rng& rng) {
  cfg.validate();
  const int p = cfg.p;
  const int T = cfg.T;
  const int n = T * cfg.n_per_treatment;

  Dataset data;
  data.meta = cfg.meta;
  data.positions.resize(static_cast<std::size_t>(p));
  data.positions[0] = 1'000'000;
  if (p > 1) {
    const std::vector<long long> gaps = draw_gaps(cfg, rng);
    for (int j = 1; j < p; ++j)
      data.positions[static_cast<std::size_t>(j)] =
          data.positions[static_cast<std::size_t>(j - 1)] + gaps[static_cast<std::size_t>(j - 1)];
  }
  data.probe_ids.resize(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "cg%06d", j + 1);
    data.probe_ids[static_cast<std::size_t>(j)] = buf;
  }
  data.treatments.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) data.treatments[static_cast<std::size_t>(i)] = i / cfg.n_per_treatment + 1;

  const std::vector<double> distances =
      p > 1 ? normalize_distances(data.positions) : std::vector<double>{};

  SimTruth truth;
  truth.hp_true = cfg.hp_true;
  truth.hp_true.eta = cfg.eta_0;
  truth.hp_true.sigma2 = cfg.sigma2_0;

  // step 1: latent methylation states along the chromosome
  truth.h_true = generate_methylation_states(p, distances, cfg.hmm_kappa, rng);

  // steps 2-3: probe random effects around the state baselines
  truth.chi_true.resize(static_cast<std::size_t>(p));
  const double sd_chi = std::sqrt(cfg.tau_chi2);
  for (int j = 0; j < p; ++j) {
    const int h = truth.h_true[static_cast<std::size_t>(j)];
    const double base = h == 1   ? cfg.baseline_methylated
                        : h == 3 ? cfg.baseline_demethylated
                                 : cfg.baseline_transit;
    truth.chi_true[static_cast<std::size_t>(j)] = rng.normal(logit(base), sd_chi);
  }

  // treatment-probe effects from the franchise prior
  const BaseMeasureG g_true = stick_breaking_realization(
      truth.hp_true.beta_mass, truth.hp_true.mu_G, truth.hp_true.tau_G2, cfg.truncation_L, rng);
  const FranchiseState fs = simulate_franchise(p, distances, truth.hp_true, g_true, T, rng);

  truth.s_true.resize(static_cast<std::size_t>(p));
  truth.theta_true = Matrix(static_cast<std::size_t>(p), static_cast<std::size_t>(T));
  for (int j = 0; j < p; ++j) {
    truth.s_true[static_cast<std::size_t>(j)] = fs.s[static_cast<std::size_t>(j)];
    const std::vector<double>& dish = fs.theta(j);
    for (int t = 0; t < T; ++t) truth.theta_true(static_cast<std::size_t>(j), static_cast<std::size_t>(t)) = dish[static_cast<std::size_t>(t)];
  }

  // step 4 + observation model: no subject effects in the generator
  const double sd_obs = std::sqrt(cfg.sigma2_0);
  data.values = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) {
    int depth = 0;
    do {
      depth = rng.poisson(cfg.read_depth_mean);
    } while (depth < 1);
    for (int i = 0; i < n; ++i) {
      const int t = data.treatments[static_cast<std::size_t>(i)];
      const double mean = truth.chi_true[static_cast<std::size_t>(j)] +
                          truth.theta_true(static_cast<std::size_t>(j), static_cast<std::size_t>(t - 1));
      const double x = inverse_logit(rng.normal(mean, sd_obs));
      data.values(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          static_cast<double>(rng.binomial(depth, x)) / static_cast<double>(depth);
    }
  }
  data.validate();
  return {std::move(data), std::move(truth)};
}

std::pair<Dataset, SimTruth> generate_dataset(const SimConfig& cfg) {
  Rng rng(cfg.seed);
  return generate_dataset(cfg, rng);
}

}  // namespace stickydiff
