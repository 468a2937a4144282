#include "stickydiff/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stickydiff/distributions.hpp"
#include "stickydiff/errors.hpp"

namespace stickydiff {

double anova_pvalue_one(const std::vector<double>& values, const std::vector<int>& treatments, int T) {
  const std::size_t n = values.size();
  std::vector<double> group_sum(static_cast<std::size_t>(T), 0.0);
  std::vector<int> group_n(static_cast<std::size_t>(T), 0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    group_sum[static_cast<std::size_t>(treatments[i] - 1)] += values[i];
    group_n[static_cast<std::size_t>(treatments[i] - 1)] += 1;
    grand += values[i];
  }
  grand /= static_cast<double>(n);
  double ssb = 0.0;
  for (int t = 0; t < T; ++t) {
    const double m = group_sum[static_cast<std::size_t>(t)] / group_n[static_cast<std::size_t>(t)];
    ssb += group_n[static_cast<std::size_t>(t)] * (m - grand) * (m - grand);
  }
  double ssw = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int t = treatments[i] - 1;
    const double m = group_sum[static_cast<std::size_t>(t)] / group_n[static_cast<std::size_t>(t)];
    ssw += (values[i] - m) * (values[i] - m);
  }
  const double df1 = static_cast<double>(T - 1);
  const double df2 = static_cast<double>(n) - static_cast<double>(T);
  if (ssw <= 0.0) {
    // degenerate column: no within-group variation
    return ssb <= 0.0 ? 1.0 : 0.0;
  }
  const double f = (ssb / df1) / (ssw / df2);
  return f_sf(f, df1, df2);
}

double kruskal_wallis_pvalue_one(const std::vector<double>& values, const std::vector<int>& treatments, int T) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> rank(n);
  double tie_sum = 0.0;  // sum of (t^3 - t) over tie groups
  std::size_t i = 0;
  while (i < n) {
    std::size_t jx = i;
    while (jx + 1 < n && values[order[jx + 1]] == values[order[i]]) ++jx;
    const double mid = (static_cast<double>(i) + static_cast<double>(jx)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= jx; ++k) rank[order[k]] = mid;
    const double t = static_cast<double>(jx - i + 1);
    tie_sum += t * t * t - t;
    i = jx + 1;
  }

  const double nn = static_cast<double>(n);
  const double tie_correction = 1.0 - tie_sum / (nn * nn * nn - nn);
  if (tie_correction <= 0.0) return 1.0;  // everything tied

  std::vector<double> rank_sum(static_cast<std::size_t>(T), 0.0);
  std::vector<int> group_n(static_cast<std::size_t>(T), 0);
  for (std::size_t k = 0; k < n; ++k) {
    rank_sum[static_cast<std::size_t>(treatments[k] - 1)] += rank[k];
    group_n[static_cast<std::size_t>(treatments[k] - 1)] += 1;
  }
  double h = 0.0;
  for (int t = 0; t < T; ++t)
    h += rank_sum[static_cast<std::size_t>(t)] * rank_sum[static_cast<std::size_t>(t)] /
         group_n[static_cast<std::size_t>(t)];
  h = 12.0 / (nn * (nn + 1.0)) * h - 3.0 * (nn + 1.0);
  h /= tie_correction;
  if (h < 0.0) h = 0.0;
  return chi2_sf(h, static_cast<double>(T - 1));
}

namespace {

template <typename F>
std::vector<double> per_probe(const Dataset& data, F&& pvalue_fn) {
  data.validate();
  const int T = data.n_treatments();
  for (int count : data.treatment_sizes())
    if (count < 2) throw validation_error("baseline tests: every treatment needs >= 2 samples");
  const std::size_t n = data.n_samples();
  const std::size_t p = data.n_probes();
  std::vector<double> out(p);
  std::vector<double> column(n);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = data.values(i, j);
    out[j] = pvalue_fn(column, data.treatments, T);
  }
  return out;
}

}  // namespace

std::vector<double> anova_pvalues(const Dataset& data) {
  return per_probe(data, anova_pvalue_one);
}

std::vector<double> kruskal_wallis_pvalues(const Dataset& data) {
  return per_probe(data, kruskal_wallis_pvalue_one);
}

std::vector<double> bh_adjust(const std::vector<double>& pvalues) {
  const std::size_t m = pvalues.size();
  for (double pv : pvalues)
    if (!(pv >= 0.0 && pv <= 1.0)) throw validation_error("bh_adjust: p-values must lie in [0,1]");
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
  std::vector<double> adjusted(m);
  double running_min = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    const double q = pvalues[order[k]] * static_cast<double>(m) / static_cast<double>(k + 1);
    running_min = std::min(running_min, q);
    adjusted[order[k]] = running_min;
  }
  return adjusted;
}

}  // namespace stickydiff
