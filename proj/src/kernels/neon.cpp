#include <arm_neon.h>

#include "resonant/kernels.hpp"

namespace resonant::simd::detail {

ComplexSum dot_real_complex_neon(const double* w, const double* re, const double* im,
                                 std::size_t n) {
  float64x2_t ar0 = vdupq_n_f64(0.0);
  float64x2_t ai0 = vdupq_n_f64(0.0);
  float64x2_t ar1 = vdupq_n_f64(0.0);
  float64x2_t ai1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t w0 = vld1q_f64(w + i);
    const float64x2_t w1 = vld1q_f64(w + i + 2);
    ar0 = vfmaq_f64(ar0, w0, vld1q_f64(re + i));
    ai0 = vfmaq_f64(ai0, w0, vld1q_f64(im + i));
    ar1 = vfmaq_f64(ar1, w1, vld1q_f64(re + i + 2));
    ai1 = vfmaq_f64(ai1, w1, vld1q_f64(im + i + 2));
  }
  double sr = vaddvq_f64(vaddq_f64(ar0, ar1));
  double si = vaddvq_f64(vaddq_f64(ai0, ai1));
  for (; i < n; ++i) {
    sr += w[i] * re[i];
    si += w[i] * im[i];
  }
  return {sr, si};
}

ComplexSum weighted_rows_neon(const double* w, const double* re, const double* im, std::size_t len,
                              std::size_t rows, std::size_t stride, const double* cre,
                              const double* cim) {
  float64x2_t acc_r = vdupq_n_f64(0.0);
  float64x2_t acc_i = vdupq_n_f64(0.0);
  double tail_r = 0.0;
  double tail_i = 0.0;
  const std::size_t body = len & ~std::size_t{1};
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w + r * stride;
    const double* xr = re + r * stride;
    const double* xi = im + r * stride;
    float64x2_t dr = vdupq_n_f64(0.0);
    float64x2_t di = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < body; i += 2) {
      const float64x2_t wv = vld1q_f64(wr + i);
      dr = vfmaq_f64(dr, wv, vld1q_f64(xr + i));
      di = vfmaq_f64(di, wv, vld1q_f64(xi + i));
    }
    double sr = 0.0;
    double si = 0.0;
    for (std::size_t i = body; i < len; ++i) {
      sr += wr[i] * xr[i];
      si += wr[i] * xi[i];
    }
    acc_r = vfmaq_n_f64(vfmsq_n_f64(acc_r, di, cim[r]), dr, cre[r]);
    acc_i = vfmaq_n_f64(vfmaq_n_f64(acc_i, dr, cim[r]), di, cre[r]);
    tail_r += cre[r] * sr - cim[r] * si;
    tail_i += cre[r] * si + cim[r] * sr;
  }
  return {vaddvq_f64(acc_r) + tail_r, vaddvq_f64(acc_i) + tail_i};
}

}  // namespace resonant::simd::detail
