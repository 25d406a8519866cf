// Built with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "resonant/kernels.hpp"

namespace resonant::simd::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

ComplexSum dot_real_complex_avx2(const double* w, const double* re, const double* im,
                                 std::size_t n) {
  // Two independent accumulator pairs hide the FMA latency.
  __m256d ar0 = _mm256_setzero_pd();
  __m256d ai0 = _mm256_setzero_pd();
  __m256d ar1 = _mm256_setzero_pd();
  __m256d ai1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d w0 = _mm256_loadu_pd(w + i);
    const __m256d w1 = _mm256_loadu_pd(w + i + 4);
    ar0 = _mm256_fmadd_pd(w0, _mm256_loadu_pd(re + i), ar0);
    ai0 = _mm256_fmadd_pd(w0, _mm256_loadu_pd(im + i), ai0);
    ar1 = _mm256_fmadd_pd(w1, _mm256_loadu_pd(re + i + 4), ar1);
    ai1 = _mm256_fmadd_pd(w1, _mm256_loadu_pd(im + i + 4), ai1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d w0 = _mm256_loadu_pd(w + i);
    ar0 = _mm256_fmadd_pd(w0, _mm256_loadu_pd(re + i), ar0);
    ai0 = _mm256_fmadd_pd(w0, _mm256_loadu_pd(im + i), ai0);
  }
  double sr = hsum(_mm256_add_pd(ar0, ar1));
  double si = hsum(_mm256_add_pd(ai0, ai1));
  for (; i < n; ++i) {
    sr += w[i] * re[i];
    si += w[i] * im[i];
  }
  return {sr, si};
}

ComplexSum weighted_rows_avx2(const double* w, const double* re, const double* im, std::size_t len,
                              std::size_t rows, std::size_t stride, const double* cre,
                              const double* cim) {
  // Lane-wise row sums are scaled by the row factor before the single final
  // horizontal sum.
  __m256d acc_r = _mm256_setzero_pd();
  __m256d acc_i = _mm256_setzero_pd();
  double tail_r = 0.0;
  double tail_i = 0.0;
  const std::size_t body = len & ~std::size_t{3};
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w + r * stride;
    const double* xr = re + r * stride;
    const double* xi = im + r * stride;
    __m256d dr = _mm256_setzero_pd();
    __m256d di = _mm256_setzero_pd();
    for (std::size_t i = 0; i < body; i += 4) {
      const __m256d wv = _mm256_loadu_pd(wr + i);
      dr = _mm256_fmadd_pd(wv, _mm256_loadu_pd(xr + i), dr);
      di = _mm256_fmadd_pd(wv, _mm256_loadu_pd(xi + i), di);
    }
    double sr = 0.0;
    double si = 0.0;
    for (std::size_t i = body; i < len; ++i) {
      sr += wr[i] * xr[i];
      si += wr[i] * xi[i];
    }
    const __m256d cr = _mm256_set1_pd(cre[r]);
    const __m256d ci = _mm256_set1_pd(cim[r]);
    acc_r = _mm256_fmadd_pd(cr, dr, _mm256_fnmadd_pd(ci, di, acc_r));
    acc_i = _mm256_fmadd_pd(cr, di, _mm256_fmadd_pd(ci, dr, acc_i));
    tail_r += cre[r] * sr - cim[r] * si;
    tail_i += cre[r] * si + cim[r] * sr;
  }
  return {hsum(acc_r) + tail_r, hsum(acc_i) + tail_i};
}

}  // namespace resonant::simd::detail
