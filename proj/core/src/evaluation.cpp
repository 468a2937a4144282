#include "stickydiff/evaluation.hpp"

#include <algorithm>
#include <numeric>

#include "stickydiff/errors.hpp"

namespace stickydiff {

std::vector<std::pair<double, double>> roc_points(const std::vector<double>& scores,
                                                  const std::vector<bool>& truth) {
  if (scores.size() != truth.size()) throw validation_error("roc_points: size mismatch");
  const std::size_t p = scores.size();
  long total_pos = 0;
  for (bool t : truth) total_pos += t ? 1 : 0;
  const long total_neg = static_cast<long>(p) - total_pos;
  if (total_pos == 0 || total_neg == 0)
    throw validation_error("roc_points: truth must contain both classes");

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<std::pair<double, double>> points;
  points.emplace_back(0.0, 0.0);
  long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < p) {
    std::size_t jx = i;
    while (jx + 1 < p && scores[order[jx + 1]] == scores[order[i]]) ++jx;
    for (std::size_t k = i; k <= jx; ++k) {
      if (truth[order[k]]) ++tp; else ++fp;
    }
    points.emplace_back(static_cast<double>(fp) / static_cast<double>(total_neg),
                        static_cast<double>(tp) / static_cast<double>(total_pos));
    i = jx + 1;
  }
  return points;
}

double auc(const std::vector<std::pair<double, double>>& points) {
  double area = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    const double dx = points[k].first - points[k - 1].first;
    area += dx * 0.5 * (points[k].second + points[k - 1].second);
  }
  return area;
}

double auc_partial(const std::vector<std::pair<double, double>>& points, double fpr_cap) {
  if (!(fpr_cap > 0.0 && fpr_cap <= 1.0))
    throw validation_error("auc_partial: fpr_cap must lie in (0, 1]");
  double area = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    double x0 = points[k - 1].first, y0 = points[k - 1].second;
    double x1 = points[k].first, y1 = points[k].second;
    if (x0 >= fpr_cap) break;
    if (x1 > fpr_cap) {
      const double w = (fpr_cap - x0) / (x1 - x0);
      y1 = y0 + w * (y1 - y0);
      x1 = fpr_cap;
    }
    area += (x1 - x0) * 0.5 * (y0 + y1);
  }
  return area / fpr_cap;
}

double achieved_fdr(const std::vector<bool>& called, const std::vector<bool>& truth) {
  long n_called = 0, n_false = 0;
  for (std::size_t j = 0; j < called.size(); ++j) {
    if (!called[j]) continue;
    ++n_called;
    if (!truth[j]) ++n_false;
  }
  if (n_called == 0) return 0.0;
  return static_cast<double>(n_false) / static_cast<double>(n_called);
}

}  // namespace stickydiff
