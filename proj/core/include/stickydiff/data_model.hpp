#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace stickydiff {

// Dense row-major matrix, rows = samples, columns = probes.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// Observed methylation proportions with treatment labels and probe positions.
// Immutable after construction (validated there); safe to share across threads.
struct Dataset {
  Matrix values;                     // n x p, proportions in [0,1]
  std::vector<int> treatments;       // n labels in 1..T
  std::vector<long long> positions;  // p strictly increasing coordinates (bp)
  std::vector<std::string> probe_ids;
  std::string meta;

  std::size_t n_samples() const { return values.rows(); }
  std::size_t n_probes() const { return values.cols(); }
  int n_treatments() const;

  // Number of samples per treatment (index t-1).
  std::vector<int> treatment_sizes() const;

  // Throws validation_error on any invariant violation. `clamped` allows
  // boundary proportions 0/1 (they are clamped later by logit_transform).
  void validate() const;
};

struct LogitData {
  Matrix z;                        // n x p, finite
  std::vector<double> distances;   // p-1 positive reals summing to 1 (empty when p == 1)
  std::vector<int> treatments;
  int T = 0;
};

// positions -> consecutive gaps rescaled to sum 1.
std::vector<double> normalize_distances(const std::vector<long long>& positions);

// Elementwise log(x/(1-x)) after clamping values into [clamp_eps, 1-clamp_eps].
LogitData logit_transform(const Dataset& data, double clamp_eps = 1e-6);

inline double logit(double x) { return std::log(x / (1.0 - x)); }
inline double inverse_logit(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace stickydiff
