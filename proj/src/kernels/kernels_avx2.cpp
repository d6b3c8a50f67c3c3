#include "fmros/kernels/kernels.hpp"

#if defined(FMROS_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <cassert>
#include <cmath>

namespace fmros::kernels::avx2 {

namespace {

// exp() for 4 doubles. Range reduction against a two-part ln2 plus a
// degree-13 Taylor polynomial on |r| <= ln2/2 keeps the result within ~2 ulp
// of libm over the clamped domain [-708, 708].
inline __m256d exp_pd(__m256d x) {
  const __m256d kLog2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d kLn2Hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d kLn2Lo = _mm256_set1_pd(1.90821492927058770002e-10);

  x = _mm256_min_pd(x, _mm256_set1_pd(708.0));
  x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));

  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, kLog2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, kLn2Hi, x);
  r = _mm256_fnmadd_pd(k, kLn2Lo, r);

  __m256d p = _mm256_set1_pd(1.6059043836821614599e-10);  // 1/13!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.0876756987868098979e-09));   // 1/12!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.5052108385441718775e-08));   // 1/11!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985890653e-07));   // 1/10!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985892511e-06));   // 1/9!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.4801587301587301566e-05));   // 1/8!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.9841269841269841253e-04));   // 1/7!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.3888888888888889419e-03));   // 1/6!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.3333333333333332177e-03));   // 1/5!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.1666666666666664354e-02));   // 1/4!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.6666666666666665741e-01));   // 1/3!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(5.0e-01));                     // 1/2!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  // 2^k through the exponent bits; |k| <= 1022 here so no denormal handling.
  const __m128i k32 = _mm256_cvtpd_epi32(k);
  const __m256i k64 = _mm256_cvtepi32_epi64(k32);
  const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

inline double hsum_pd(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
}

}  // namespace

void exp_weights(double omega, std::span<const double> y, std::span<double> out) {
  assert(y.size() == out.size());
  const std::size_t n = y.size();
  const __m256d neg_omega = _mm256_set1_pd(-omega);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d yi = _mm256_loadu_pd(y.data() + i);
    _mm256_storeu_pd(out.data() + i, exp_pd(_mm256_mul_pd(neg_omega, yi)));
  }
  for (; i < n; ++i) out[i] = std::exp(-omega * y[i]);
}

void grad_hess(std::span<const double> y, std::span<const double> yhat,
               std::span<const double> w, std::span<double> grad,
               std::span<double> hess) {
  assert(y.size() == yhat.size() && y.size() == w.size());
  const std::size_t n = y.size();
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wi = _mm256_loadu_pd(w.data() + i);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(yhat.data() + i),
                                    _mm256_loadu_pd(y.data() + i));
    const __m256d w2 = _mm256_mul_pd(two, wi);
    _mm256_storeu_pd(grad.data() + i, _mm256_mul_pd(w2, d));
    _mm256_storeu_pd(hess.data() + i, w2);
  }
  for (; i < n; ++i) {
    grad[i] = 2.0 * w[i] * (yhat[i] - y[i]);
    hess[i] = 2.0 * w[i];
  }
}

double weighted_sse(std::span<const double> y, std::span<const double> yhat,
                    std::span<const double> w) {
  assert(y.size() == yhat.size() && y.size() == w.size());
  const std::size_t n = y.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(y.data() + i),
                                    _mm256_loadu_pd(yhat.data() + i));
    const __m256d wr = _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), r);
    acc = _mm256_fmadd_pd(wr, r, acc);
  }
  double total = hsum_pd(acc);
  for (; i < n; ++i) {
    const double r = y[i] - yhat[i];
    total += w[i] * r * r;
  }
  return total;
}

double sse(std::span<const double> y, std::span<const double> yhat) {
  assert(y.size() == yhat.size());
  const std::size_t n = y.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(y.data() + i),
                                    _mm256_loadu_pd(yhat.data() + i));
    acc = _mm256_fmadd_pd(r, r, acc);
  }
  double total = hsum_pd(acc);
  for (; i < n; ++i) {
    const double r = y[i] - yhat[i];
    total += r * r;
  }
  return total;
}

WeightedSum weighted_sum(std::span<const double> y, std::span<const double> w) {
  assert(y.size() == w.size());
  const std::size_t n = y.size();
  __m256d acc_wy = _mm256_setzero_pd();
  __m256d acc_w = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wi = _mm256_loadu_pd(w.data() + i);
    acc_wy = _mm256_fmadd_pd(wi, _mm256_loadu_pd(y.data() + i), acc_wy);
    acc_w = _mm256_add_pd(acc_w, wi);
  }
  WeightedSum s{hsum_pd(acc_wy), hsum_pd(acc_w)};
  for (; i < n; ++i) {
    s.wy += w[i] * y[i];
    s.w += w[i];
  }
  return s;
}

void ros_curve_eval(const RosCurveCoeffs& c, std::span<const double> fmc,
                    std::span<double> out) {
  assert(fmc.size() == out.size());
  const std::size_t n = fmc.size();
  // Same operation order as the scalar kernel so surviving lanes match
  // bitwise (no fma in this one).
  const __m256d rp = _mm256_set1_pd(c.r_per_pct);
  const __m256d scale = _mm256_set1_pd(c.scale);
  const __m256d qa = _mm256_set1_pd(c.qa);
  const __m256d qb = _mm256_set1_pd(c.qb);
  const __m256d c3 = _mm256_set1_pd(3.52);
  const __m256d c2 = _mm256_set1_pd(5.11);
  const __m256d c1 = _mm256_set1_pd(-2.59);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(fmc.data() + i);
    const __m256d r = _mm256_mul_pd(x, rp);
    __m256d damp = _mm256_sub_pd(c2, _mm256_mul_pd(c3, r));
    damp = _mm256_add_pd(c1, _mm256_mul_pd(r, damp));
    damp = _mm256_add_pd(one, _mm256_mul_pd(r, damp));
    const __m256d denom = _mm256_add_pd(qa, _mm256_mul_pd(qb, x));
    const __m256d ros = _mm256_div_pd(_mm256_mul_pd(scale, damp), denom);
    const __m256d live = _mm256_cmp_pd(r, one, _CMP_LT_OQ);
    _mm256_storeu_pd(out.data() + i, _mm256_and_pd(ros, live));
  }
  for (; i < n; ++i) {
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

}  // namespace fmros::kernels::avx2

#endif  // FMROS_HAVE_AVX2_KERNELS
