#include <algorithm>
#include <chrono>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "resonant/couplings.hpp"
#include "resonant/evolution.hpp"
#include "resonant/kernels.hpp"

using namespace resonant;

namespace {

std::vector<simd::Backend> available_backends() {
  std::vector<simd::Backend> out;
  for (auto b : {simd::Backend::kScalar, simd::Backend::kAvx2, simd::Backend::kNeon}) {
    if (simd::available(b)) out.push_back(b);
  }
  return out;
}

// Every resonant quartet set, so the contraction does its full O(n_max³) work.
CouplingTensor dense_tensor(int n_max) {
  CouplingTensor c(n_max);
  for (int n = 0; n <= n_max; ++n)
    for (int m = n; m <= n_max; ++m)
      for (int k = 0; k <= n_max; ++k) {
        const int l = n + m - k;
        if (l >= 0 && l <= n_max) c.set(n, m, k, l, 1.0 / (1.0 + n + m + k * l));
      }
  return c;
}

struct KernelGuard {
  const simd::Backend saved = simd::active().backend;
  ~KernelGuard() { simd::select(saved); }
};

}  // namespace

TEST_CASE("scalar kernel sums in order") {
  const double w[] = {1, 2, 3};
  const double re[] = {1, 1, 1};
  const double im[] = {0, -1, 2};
  const auto s = simd::detail::dot_real_complex_scalar(w, re, im, 3);
  CHECK(s.re == 6.0);
  CHECK(s.im == 4.0);
  CHECK(simd::detail::dot_real_complex_scalar(w, re, im, 0).re == 0.0);
}

TEST_CASE("vector kernels agree with the scalar reference") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const auto ref = simd::table(simd::Backend::kScalar).dot_real_complex;
  for (auto b : available_backends()) {
    const auto fn = simd::table(b).dot_real_complex;
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 31u, 65u, 130u}) {
      std::vector<double> w(n), re(n), im(n);
      double scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = g(rng);
        re[i] = g(rng);
        im[i] = g(rng);
        scale += std::abs(w[i]) * (std::abs(re[i]) + std::abs(im[i]));
      }
      const auto x = fn(w.data(), re.data(), im.data(), n);
      const auto y = ref(w.data(), re.data(), im.data(), n);
      CHECK(std::abs(x.re - y.re) <= 1e-15 * std::max(scale, 1.0));
      CHECK(std::abs(x.im - y.im) <= 1e-15 * std::max(scale, 1.0));
    }
  }
}

TEST_CASE("weighted row blocks agree with the scalar reference") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  const auto ref = simd::table(simd::Backend::kScalar).weighted_rows;
  for (auto b : available_backends()) {
    const auto fn = simd::table(b).weighted_rows;
    for (std::size_t len : {1u, 3u, 4u, 5u, 17u, 33u, 65u}) {
      const std::size_t rows = len, stride = len + 2;
      std::vector<double> w(rows * stride), re(w.size()), im(w.size()), cre(rows), cim(rows);
      for (auto* v : {&w, &re, &im, &cre, &cim})
        for (auto& x : *v) x = g(rng);
      const auto x = fn(w.data(), re.data(), im.data(), len, rows, stride, cre.data(), cim.data());
      const auto y = ref(w.data(), re.data(), im.data(), len, rows, stride, cre.data(), cim.data());
      const double scale = static_cast<double>(rows * len);
      CHECK(std::abs(x.re - y.re) <= 1e-14 * scale);
      CHECK(std::abs(x.im - y.im) <= 1e-14 * scale);
    }
  }
  // One row with unit factor is the plain dot product.
  const double w[] = {1, 2, 3}, re[] = {1, 1, 1}, im[] = {0, -1, 2}, one[] = {1}, zero[] = {0};
  const auto s = ref(w, re, im, 3, 1, 3, one, zero);
  CHECK(s.re == 6.0);
  CHECK(s.im == 4.0);
  const auto t = ref(w, re, im, 3, 1, 3, zero, one);  // times i
  CHECK(t.re == -4.0);
  CHECK(t.im == 6.0);
}

TEST_CASE("unavailable backends are refused") {
  for (auto b : {simd::Backend::kAvx2, simd::Backend::kNeon}) {
    if (!simd::available(b)) CHECK_THROWS_AS(simd::table(b), std::invalid_argument);
  }
  CHECK(simd::name(simd::Backend::kAvx2) == "avx2");
}

TEST_CASE("resonant rhs agrees across backends") {
  KernelGuard guard;
  std::mt19937_64 rng(3);
  const CouplingTensor c = gen_conformal(16);
  const ModeState s{testing::random_state(rng, 16, 0.8), 0.0};
  simd::select(simd::Backend::kScalar);
  const auto ref = rhs(c, s);
  double scale = 0.0;
  for (auto v : ref) scale = std::max(scale, std::abs(v));
  for (auto b : available_backends()) {
    simd::select(b);
    const auto out = rhs(c, s);
    for (std::size_t n = 0; n < ref.size(); ++n) CHECK(std::abs(out[n] - ref[n]) <= 1e-13 * scale);
  }
}

TEST_CASE("rhs cost grows as n_max cubed") {
  std::mt19937_64 rng(8);
  auto seconds_per_call = [&](int n_max) {
    const ResonantRhs f(dense_tensor(n_max));
    const auto a = testing::random_state(rng, n_max, 0.9);
    ComplexVector out(a.size());
    double best = 1e300;
    for (int rep = 0; rep < 9; ++rep) {
      const int calls = 4096 / (n_max / 16);
      const auto t0 = std::chrono::steady_clock::now();
      for (int i = 0; i < calls; ++i) f(a, out);
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
      best = std::min(best, dt.count() / calls);
    }
    return best;
  };
  const double ratio = seconds_per_call(64) / seconds_per_call(32);
  MESSAGE("rhs time ratio n_max 64 / 32: " << ratio);
  CHECK(ratio >= 6.0);
  CHECK(ratio <= 10.0);
}
