#pragma once

#include <span>

namespace fmros {

// Root mean squared error; throws std::invalid_argument on length mismatch
// or empty input.
double rmse(std::span<const double> y, std::span<const double> yhat);

struct PairedTResult {
  double t_stat = 0.0;
  double p_value = 1.0;  // two-sided
  double mean_diff = 0.0;
  long long n = 0;
  // Zero variance with a nonzero mean difference: t is unbounded and the
  // p-value is reported as 0.
  bool degenerate = false;
};

// Classical paired t-test on a - b with n - 1 degrees of freedom. Requires
// equal lengths >= 2.
PairedTResult paired_t(std::span<const double> a, std::span<const double> b);

}  // namespace fmros
