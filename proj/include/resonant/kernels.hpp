#pragma once

#include <cstddef>
#include <string_view>

namespace resonant::simd {

enum class Backend { kScalar, kAvx2, kNeon };

struct ComplexSum {
  double re = 0.0;
  double im = 0.0;
};

/// Σ_i w[i]·(re[i] + i·im[i]): a real weight row against a split complex vector.
/// This is the inner loop of the resonant right-hand side and of the Hermite
/// transforms.
using DotRealComplexFn = ComplexSum (*)(const double* w, const double* re, const double* im,
                                        std::size_t n);

/// Σ_r (cre[r] + i·cim[r])·Σ_{i<len} w[r·stride + i]·(re + i·im)[r·stride + i]:
/// a block of `rows` such dot products, each weighted by a complex factor.
/// One call per output mode of the resonant right-hand side.
using WeightedRowsFn = ComplexSum (*)(const double* w, const double* re, const double* im,
                                      std::size_t len, std::size_t rows, std::size_t stride,
                                      const double* cre, const double* cim);

struct KernelTable {
  Backend backend;
  DotRealComplexFn dot_real_complex;
  WeightedRowsFn weighted_rows;
};

std::string_view name(Backend b);

/// Compiled in and supported by the running CPU.
bool available(Backend b);

/// Table for a specific backend; throws std::invalid_argument if unavailable.
const KernelTable& table(Backend b);

/// The process-wide table. Chosen once at start-up: RESONANT_KERNEL
/// (scalar|avx2|neon) if set, otherwise the widest available backend.
const KernelTable& active();

/// Overrides the process-wide choice; used by equivalence tests and --kernel.
void select(Backend b);

namespace detail {
ComplexSum dot_real_complex_scalar(const double* w, const double* re, const double* im,
                                   std::size_t n);
ComplexSum weighted_rows_scalar(const double* w, const double* re, const double* im, std::size_t len,
                        std::size_t rows, std::size_t stride, const double* cre, const double* cim);
#if defined(RESONANT_HAVE_AVX2_KERNEL)
ComplexSum dot_real_complex_avx2(const double* w, const double* re, const double* im,
                                 std::size_t n);
ComplexSum weighted_rows_avx2(const double* w, const double* re, const double* im, std::size_t len,
                        std::size_t rows, std::size_t stride, const double* cre, const double* cim);
#endif
#if defined(RESONANT_HAVE_NEON_KERNEL)
ComplexSum dot_real_complex_neon(const double* w, const double* re, const double* im,
                                 std::size_t n);
ComplexSum weighted_rows_neon(const double* w, const double* re, const double* im, std::size_t len,
                        std::size_t rows, std::size_t stride, const double* cre, const double* cim);
#endif
}  // namespace detail

}  // namespace resonant::simd
