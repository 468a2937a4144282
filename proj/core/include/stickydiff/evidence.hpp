#pragma once

#include <span>

namespace stickydiff {

enum class BfDirection { order1_vs_order0, order0_vs_order1 };

struct BfBound {
  double estimate = 0.0;  // Jensen lower bound of the log-Bayes factor
  double mc_se = 0.0;     // Monte-Carlo standard error of the estimate
};

// Empirical average of the per-iteration conditional log odds
// log P(eta > 0 | X, rest) - log P(eta = 0 | X, rest) stored with each
// posterior sample, in the requested direction. The standard error uses
// batch means to absorb chain autocorrelation.
BfBound bf_lower_bound(std::span<const double> log_odds_trace, BfDirection direction);

}  // namespace stickydiff
