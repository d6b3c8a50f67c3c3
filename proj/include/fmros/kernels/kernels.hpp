#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops behind the loss, boosting and spread-curve code.
// Every kernel has a scalar reference implementation and an AVX2 variant;
// the top-level entry points dispatch once, at first use, based on CPU
// support (overridable with FMROS_KERNELS=scalar|avx2 or force_isa()).
// Scalar and AVX2 results agree elementwise and to reduction-reassociation
// accuracy; the equivalence tests pin the tolerances.

namespace fmros::kernels {

// Precomputed constants of the reduced spread curve
//   ros(fmc) = scale * d(r) / (qa + qb * fmc),  r = fmc * r_per_pct,
//   d(r) = 1 + r*(-2.59 + r*(5.11 - 3.52*r)),   ros = 0 for r >= 1,
// with fmc in percent. Derived by fire_ros from the full fuel model.
struct RosCurveCoeffs {
  double r_per_pct = 0.0;  // 1 / moisture of extinction (percent)
  double scale = 0.0;      // m/s
  double qa = 1.0;
  double qb = 0.0;
};

enum class Isa { scalar, avx2 };

Isa active_isa();
bool isa_available(Isa isa);
// Forces a specific implementation (tests, benchmarking). Throws
// std::runtime_error if the ISA is not available on this CPU.
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);

// out[i] = exp(-omega * y[i])
void exp_weights(double omega, std::span<const double> y, std::span<double> out);

// grad[i] = 2*w[i]*(yhat[i]-y[i]); hess[i] = 2*w[i]
void grad_hess(std::span<const double> y, std::span<const double> yhat,
               std::span<const double> w, std::span<double> grad,
               std::span<double> hess);

// sum_i w[i]*(y[i]-yhat[i])^2
double weighted_sse(std::span<const double> y, std::span<const double> yhat,
                    std::span<const double> w);

// sum_i (y[i]-yhat[i])^2
double sse(std::span<const double> y, std::span<const double> yhat);

struct WeightedSum {
  double wy = 0.0;
  double w = 0.0;
};
// {sum w[i]*y[i], sum w[i]}
WeightedSum weighted_sum(std::span<const double> y, std::span<const double> w);

// out[i] = ros(fmc[i]) per RosCurveCoeffs; fmc in percent, must be >= 0.
void ros_curve_eval(const RosCurveCoeffs& c, std::span<const double> fmc,
                    std::span<double> out);

namespace scalar {
void exp_weights(double omega, std::span<const double> y, std::span<double> out);
void grad_hess(std::span<const double> y, std::span<const double> yhat,
               std::span<const double> w, std::span<double> grad,
               std::span<double> hess);
double weighted_sse(std::span<const double> y, std::span<const double> yhat,
                    std::span<const double> w);
double sse(std::span<const double> y, std::span<const double> yhat);
WeightedSum weighted_sum(std::span<const double> y, std::span<const double> w);
void ros_curve_eval(const RosCurveCoeffs& c, std::span<const double> fmc,
                    std::span<double> out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define FMROS_HAVE_AVX2_KERNELS 1
namespace avx2 {
// Callable only when isa_available(Isa::avx2).
void exp_weights(double omega, std::span<const double> y, std::span<double> out);
void grad_hess(std::span<const double> y, std::span<const double> yhat,
               std::span<const double> w, std::span<double> grad,
               std::span<double> hess);
double weighted_sse(std::span<const double> y, std::span<const double> yhat,
                    std::span<const double> w);
double sse(std::span<const double> y, std::span<const double> yhat);
WeightedSum weighted_sum(std::span<const double> y, std::span<const double> w);
void ros_curve_eval(const RosCurveCoeffs& c, std::span<const double> fmc,
                    std::span<double> out);
}  // namespace avx2
#endif

}  // namespace fmros::kernels
