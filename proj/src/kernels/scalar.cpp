#include "resonant/kernels.hpp"

namespace resonant::simd::detail {

// Reference ordering: strictly ascending i.
ComplexSum dot_real_complex_scalar(const double* w, const double* re, const double* im,
                                   std::size_t n) {
  double sr = 0.0;
  double si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sr += w[i] * re[i];
    si += w[i] * im[i];
  }
  return {sr, si};
}

ComplexSum weighted_rows_scalar(const double* w, const double* re, const double* im, std::size_t len,
                                std::size_t rows, std::size_t stride, const double* cre,
                                const double* cim) {
  double sr = 0.0;
  double si = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto d = dot_real_complex_scalar(w + r * stride, re + r * stride, im + r * stride, len);
    sr += cre[r] * d.re - cim[r] * d.im;
    si += cre[r] * d.im + cim[r] * d.re;
  }
  return {sr, si};
}

}  // namespace resonant::simd::detail
