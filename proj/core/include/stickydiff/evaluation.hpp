#pragma once

#include <utility>
#include <vector>

namespace stickydiff {

// ROC points from a threshold sweep over the distinct score values (higher
// score = more differential); ties are grouped at one threshold. Includes
// (0,0) and (1,1). Truth must contain both classes.
std::vector<std::pair<double, double>> roc_points(const std::vector<double>& scores,
                                                  const std::vector<bool>& truth);

// Trapezoidal area under the curve.
double auc(const std::vector<std::pair<double, double>>& points);

// Area over FPR in [0, fpr_cap] (linear interpolation at the cap), scaled by
// 1/fpr_cap so that the range is [0,1].
double auc_partial(const std::vector<std::pair<double, double>>& points, double fpr_cap);

// false-called / total-called; 0 when nothing is called.
double achieved_fdr(const std::vector<bool>& called, const std::vector<bool>& truth);

}  // namespace stickydiff
