#pragma once

#include <vector>

#include "stickydiff/data_model.hpp"

namespace stickydiff {

// Per-probe one-way ANOVA on the proportions; p-values from F(T-1, n-T).
// A probe with zero between- and within-group variance gets p = 1.
std::vector<double> anova_pvalues(const Dataset& data);

// Per-probe Kruskal-Wallis with mid-rank tie correction; p-values from
// chi-square with T-1 degrees of freedom. All-tied probes get p = 1.
std::vector<double> kruskal_wallis_pvalues(const Dataset& data);

// Benjamini-Hochberg step-up adjusted p-values, returned in input order.
std::vector<double> bh_adjust(const std::vector<double>& pvalues);

// Shared kernels used by the MCMC initializer (which tests columns of the
// logit matrix rather than a Dataset).
double anova_pvalue_one(const std::vector<double>& values, const std::vector<int>& treatments, int T);
double kruskal_wallis_pvalue_one(const std::vector<double>& values, const std::vector<int>& treatments, int T);

}  // namespace stickydiff
