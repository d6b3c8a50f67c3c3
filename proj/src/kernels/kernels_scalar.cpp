#include <cassert>
#include <cmath>

#include "fmros/kernels/kernels.hpp"

namespace fmros::kernels::scalar {

void exp_weights(double omega, std::span<const double> y, std::span<double> out) {
  assert(y.size() == out.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = std::exp(-omega * y[i]);
}

void grad_hess(std::span<const double> y, std::span<const double> yhat,
               std::span<const double> w, std::span<double> grad,
               std::span<double> hess) {
  assert(y.size() == yhat.size() && y.size() == w.size());
  assert(y.size() == grad.size() && y.size() == hess.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    grad[i] = 2.0 * w[i] * (yhat[i] - y[i]);
    hess[i] = 2.0 * w[i];
  }
}

double weighted_sse(std::span<const double> y, std::span<const double> yhat,
                    std::span<const double> w) {
  assert(y.size() == yhat.size() && y.size() == w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - yhat[i];
    acc += w[i] * r * r;
  }
  return acc;
}

double sse(std::span<const double> y, std::span<const double> yhat) {
  assert(y.size() == yhat.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - yhat[i];
    acc += r * r;
  }
  return acc;
}

WeightedSum weighted_sum(std::span<const double> y, std::span<const double> w) {
  assert(y.size() == w.size());
  WeightedSum s;
  for (std::size_t i = 0; i < y.size(); ++i) {
    s.wy += w[i] * y[i];
    s.w += w[i];
  }
  return s;
}

void ros_curve_eval(const RosCurveCoeffs& c, std::span<const double> fmc,
                    std::span<double> out) {
  assert(fmc.size() == out.size());
  for (std::size_t i = 0; i < fmc.size(); ++i) {
    const double x = fmc[i];
    const double r = x * c.r_per_pct;
    if (r >= 1.0) {
      out[i] = 0.0;
      continue;
    }
    const double damp = 1.0 + r * (-2.59 + r * (5.11 - 3.52 * r));
    out[i] = c.scale * damp / (c.qa + c.qb * x);
  }
}

}  // namespace fmros::kernels::scalar
