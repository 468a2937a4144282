#include "stickydiff/data_model.hpp"

#include <algorithm>
#include <cmath>

#include "stickydiff/errors.hpp"

namespace stickydiff {

int Dataset::n_treatments() const {
  int t_max = 0;
  for (int t : treatments) t_max = std::max(t_max, t);
  return t_max;
}

std::vector<int> Dataset::treatment_sizes() const {
  std::vector<int> counts(static_cast<std::size_t>(n_treatments()), 0);
  for (int t : treatments) ++counts[static_cast<std::size_t>(t - 1)];
  return counts;
}

void Dataset::validate() const {
  const std::size_t n = n_samples();
  const std::size_t p = n_probes();
  if (n == 0 || p == 0) throw validation_error("dataset: empty value matrix");
  if (treatments.size() != n)
    throw validation_error("dataset: treatment labels do not match sample count");
  if (positions.size() != p)
    throw validation_error("dataset: positions do not match probe count");
  if (probe_ids.size() != p)
    throw validation_error("dataset: probe ids do not match probe count");

  for (std::size_t j = 1; j < p; ++j)
    if (positions[j] <= positions[j - 1])
      throw validation_error("dataset: positions must be strictly increasing (probe " +
                             probe_ids[j] + ")");

  const int T = n_treatments();
  if (T < 2) throw validation_error("dataset: need at least two treatment groups");
  std::vector<int> counts(static_cast<std::size_t>(T), 0);
  for (int t : treatments) {
    if (t < 1 || t > T) throw validation_error("dataset: treatment label out of range");
    ++counts[static_cast<std::size_t>(t - 1)];
  }
  for (int t = 0; t < T; ++t)
    if (counts[static_cast<std::size_t>(t)] == 0)
      throw validation_error("dataset: treatment group " + std::to_string(t + 1) + " is empty");

  for (double x : values.data())
    if (!(x >= 0.0 && x <= 1.0) || std::isnan(x))
      throw validation_error("dataset: values must lie in [0,1]");
}

std::vector<double> normalize_distances(const std::vector<long long>& positions) {
  const std::size_t p = positions.size();
  if (p < 2) throw validation_error("normalize_distances: need at least two positions");
  const double span = static_cast<double>(positions[p - 1] - positions[0]);
  if (span <= 0.0) throw validation_error("normalize_distances: positions must be strictly increasing");
  std::vector<double> out(p - 1);
  for (std::size_t k = 0; k + 1 < p; ++k) {
    const double gap = static_cast<double>(positions[k + 1] - positions[k]);
    if (gap <= 0.0)
      throw validation_error("normalize_distances: duplicate or decreasing position at index " +
                             std::to_string(k + 1));
    out[k] = gap / span;
  }
  return out;
}

LogitData logit_transform(const Dataset& data, double clamp_eps) {
  if (!(clamp_eps > 0.0 && clamp_eps <= 0.01))
    throw validation_error("logit_transform: clamp_eps must lie in (0, 0.01]");
  data.validate();

  LogitData out;
  const std::size_t n = data.n_samples();
  const std::size_t p = data.n_probes();
  out.z = Matrix(n, p);
  // evaluating log(x/(1-x)) at the upper clamp loses precision to the
  // subtraction; use the exact symmetry logit(1-eps) = -logit(eps) instead
  const double z_low = logit(clamp_eps);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const double x = data.values(i, j);
      if (x <= clamp_eps)
        out.z(i, j) = z_low;
      else if (x >= 1.0 - clamp_eps)
        out.z(i, j) = -z_low;
      else
        out.z(i, j) = logit(x);
    }
  }
  if (p >= 2) out.distances = normalize_distances(data.positions);
  out.treatments = data.treatments;
  out.T = data.n_treatments();
  return out;
}

}  // namespace stickydiff
