#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "resonant/kernels.hpp"

namespace resonant::simd {

namespace {

constexpr KernelTable kScalarTable{Backend::kScalar, &detail::dot_real_complex_scalar,
                                       &detail::weighted_rows_scalar};
#if defined(RESONANT_HAVE_AVX2_KERNEL)
constexpr KernelTable kAvx2Table{Backend::kAvx2, &detail::dot_real_complex_avx2,
                                 &detail::weighted_rows_avx2};
#endif
#if defined(RESONANT_HAVE_NEON_KERNEL)
constexpr KernelTable kNeonTable{Backend::kNeon, &detail::dot_real_complex_neon,
                                 &detail::weighted_rows_neon};
#endif

bool cpu_supports(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(RESONANT_HAVE_AVX2_KERNEL) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::kNeon:
#if defined(RESONANT_HAVE_NEON_KERNEL)
      return true;  // Advanced SIMD is mandatory on AArch64.
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("RESONANT_KERNEL")) {
    const std::string want(env);
    for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
      if (want == name(b) && available(b)) return &table(b);
    }
  }
  for (Backend b : {Backend::kAvx2, Backend::kNeon}) {
    if (available(b)) return &table(b);
  }
  return &kScalarTable;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> ptr{initial_table()};
  return ptr;
}

}  // namespace

std::string_view name(Backend b) {
  switch (b) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kNeon: return "neon";
  }
  return "unknown";
}

bool available(Backend b) { return cpu_supports(b); }

const KernelTable& table(Backend b) {
  if (!available(b)) {
    throw std::invalid_argument("kernel backend '" + std::string(name(b)) + "' is not available");
  }
  switch (b) {
#if defined(RESONANT_HAVE_AVX2_KERNEL)
    case Backend::kAvx2: return kAvx2Table;
#endif
#if defined(RESONANT_HAVE_NEON_KERNEL)
    case Backend::kNeon: return kNeonTable;
#endif
    default: return kScalarTable;
  }
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Backend b) { current().store(&table(b), std::memory_order_release); }

}  // namespace resonant::simd
