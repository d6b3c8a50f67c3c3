#include "fmros/experiment/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "fmros/kernels/kernels.hpp"

namespace fmros {

double rmse(std::span<const double> y, std::span<const double> yhat) {
  if (y.size() != yhat.size()) throw std::invalid_argument("rmse: length mismatch");
  if (y.empty()) throw std::invalid_argument("rmse: empty input");
  return std::sqrt(kernels::sse(y, yhat) / static_cast<double>(y.size()));
}

PairedTResult paired_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired_t: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) throw std::invalid_argument("paired_t: need at least two pairs");

  std::vector<double> diff(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = a[i] - b[i];
    mean += diff[i];
  }
  mean /= static_cast<double>(n);

  double ss = 0.0;
  for (double d : diff) {
    const double c = d - mean;
    ss += c * c;
  }
  const double var = ss / static_cast<double>(n - 1);

  PairedTResult res;
  res.n = static_cast<long long>(n);
  res.mean_diff = mean;
  if (var <= 0.0) {
    if (mean == 0.0) {
      res.t_stat = 0.0;
      res.p_value = 1.0;
    } else {
      res.t_stat = mean > 0 ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
      res.p_value = 0.0;
      res.degenerate = true;
    }
    return res;
  }

  res.t_stat = mean / std::sqrt(var / static_cast<double>(n));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  res.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(res.t_stat)));
  return res;
}

}  // namespace fmros
