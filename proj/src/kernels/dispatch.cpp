#include <cstdlib>
#include <stdexcept>
#include <string>

#include "fmros/kernels/kernels.hpp"

namespace fmros::kernels {

namespace {

struct Table {
  Isa isa;
  void (*exp_weights)(double, std::span<const double>, std::span<double>);
  void (*grad_hess)(std::span<const double>, std::span<const double>,
                    std::span<const double>, std::span<double>, std::span<double>);
  double (*weighted_sse)(std::span<const double>, std::span<const double>,
                         std::span<const double>);
  double (*sse)(std::span<const double>, std::span<const double>);
  WeightedSum (*weighted_sum)(std::span<const double>, std::span<const double>);
  void (*ros_curve_eval)(const RosCurveCoeffs&, std::span<const double>,
                         std::span<double>);
};

constexpr Table kScalarTable{Isa::scalar,       scalar::exp_weights,
                             scalar::grad_hess, scalar::weighted_sse,
                             scalar::sse,       scalar::weighted_sum,
                             scalar::ros_curve_eval};

#if defined(FMROS_HAVE_AVX2_KERNELS)
constexpr Table kAvx2Table{Isa::avx2,         avx2::exp_weights,
                           avx2::grad_hess,   avx2::weighted_sse,
                           avx2::sse,         avx2::weighted_sum,
                           avx2::ros_curve_eval};
#endif

const Table* g_table = nullptr;

const Table& detect() {
  Isa want = isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  if (const char* env = std::getenv("FMROS_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") {
      want = Isa::scalar;
    } else if (v == "avx2" && isa_available(Isa::avx2)) {
      want = Isa::avx2;
    }
  }
#if defined(FMROS_HAVE_AVX2_KERNELS)
  if (want == Isa::avx2) return kAvx2Table;
#endif
  return kScalarTable;
}

const Table& table() {
  if (!g_table) g_table = &detect();
  return *g_table;
}

}  // namespace

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(FMROS_HAVE_AVX2_KERNELS)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return table().isa; }

void force_isa(Isa isa) {
  if (!isa_available(isa)) throw std::runtime_error("kernel ISA not available on this CPU");
#if defined(FMROS_HAVE_AVX2_KERNELS)
  g_table = (isa == Isa::avx2) ? &kAvx2Table : &kScalarTable;
#else
  g_table = &kScalarTable;
#endif
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void exp_weights(double omega, std::span<const double> y, std::span<double> out) {
  table().exp_weights(omega, y, out);
}

void grad_hess(std::span<const double> y, std::span<const double> yhat,
               std::span<const double> w, std::span<double> grad,
               std::span<double> hess) {
  table().grad_hess(y, yhat, w, grad, hess);
}

double weighted_sse(std::span<const double> y, std::span<const double> yhat,
                    std::span<const double> w) {
  return table().weighted_sse(y, yhat, w);
}

double sse(std::span<const double> y, std::span<const double> yhat) {
  return table().sse(y, yhat);
}

WeightedSum weighted_sum(std::span<const double> y, std::span<const double> w) {
  return table().weighted_sum(y, w);
}

void ros_curve_eval(const RosCurveCoeffs& c, std::span<const double> fmc,
                    std::span<double> out) {
  table().ros_curve_eval(c, fmc, out);
}

}  // namespace fmros::kernels
