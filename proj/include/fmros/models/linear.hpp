#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fmros/features.hpp"

namespace fmros {

struct LinearModel {
  double intercept = 0.0;
  std::vector<double> coef;      // one per predictor
  double noise_variance = 0.0;   // weighted residual variance estimate

  std::size_t n_features() const { return coef.size(); }
};

// Weighted least squares by Householder QR on the sqrt(w)-scaled design
// (never the normal equations). Requires more rows than parameters and at
// least p+1 strictly positive weights; throws std::invalid_argument on bad
// input and a singularity error naming the offending column when the design
// is rank deficient.
LinearModel fit_linear(const ModelDataset& data, std::span<const double> w);

std::vector<double> predict(const LinearModel& model, std::span<const double> features,
                            std::size_t n_cols);
std::vector<double> predict(const LinearModel& model, const ModelDataset& data);

}  // namespace fmros
