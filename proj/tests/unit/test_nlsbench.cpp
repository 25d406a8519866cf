#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "resonant/couplings.hpp"
#include "resonant/errors.hpp"
#include "resonant/evolution.hpp"
#include "resonant/nlsbench.hpp"

using namespace resonant;

namespace {

FieldState basis_state(int n, int n_max) {
  FieldState f{ComplexVector(static_cast<std::size_t>(n_max) + 1), 0.0};
  f.coeffs[n] = 1.0;
  return f;
}

}  // namespace

TEST_CASE("shifted Gaussian coefficients by quadrature") {
  const double d = 0.5;
  const auto f = shifted_gaussian(d, 16);
  const NlsBench bench(16);
  const auto& grid = bench.standard();
  ComplexVector samples(grid.nodes());
  for (int j = 0; j < grid.nodes(); ++j) {
    const double y = grid.x()[j] - d;
    samples[j] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * y * y);
  }
  const auto c = grid.to_coeffs(samples);
  for (int n = 0; n <= 16; ++n) CHECK(std::abs(c[n] - f.coeffs[n]) < 1e-12);
}

TEST_CASE("cubic term is the gradient of the quartic energy") {
  std::mt19937_64 rng(31);
  const int n_max = 7;
  const NlsBench bench(n_max);
  const auto c = testing::random_state(rng, n_max, 0.8);
  const auto cubic = bench.cubic(c);
  const PhasePoly h4 = nls_quartic_hamiltonian(n_max);
  for (int n = 0; n <= n_max; ++n) {
    CHECK(std::abs(cubic[n] - evaluate(derivative_abar(h4, n), c)) < 1e-12);
  }
  const auto g = bench.cubic(basis_state(0, n_max).coeffs);
  CHECK(g[0].real() == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("linear eigenmodes at g = 0") {
  const auto traj = nls_evolve(basis_state(0, 8), 0.0, 10.0, 1e-11, 20);
  for (const auto& f : traj) {
    CHECK(std::abs(f.coeffs[0] - std::polar(1.0, -0.5 * f.t)) < 1e-10);
    CHECK(std::abs(std::abs(f.coeffs[0]) - 1.0) < 1e-10);
  }

  FieldState mix{ComplexVector(9), 0.0};
  mix.coeffs[0] = 0.6;
  mix.coeffs[1] = Complex(0, 0.8);
  for (const auto& f : nls_evolve(mix, 0.0, 10.0, 1e-11, 20)) {
    CHECK(std::abs(std::abs(f.coeffs[0]) - 0.6) < 1e-10);
    CHECK(std::abs(std::abs(f.coeffs[1]) - 0.8) < 1e-10);
    const Complex rel = f.coeffs[1] / f.coeffs[0] / Complex(0, 0.8 / 0.6);
    CHECK(std::abs(rel - std::polar(1.0, -f.t)) < 1e-10);
  }
}

TEST_CASE("norm is conserved with the nonlinearity on") {
  const auto traj = nls_evolve(shifted_gaussian(0.5, 24), 0.05, 20.0, 1e-11, 40);
  const double n0 = number(traj.front().coeffs);
  double worst = 0.0;
  for (const auto& f : traj) worst = std::max(worst, std::abs(number(f.coeffs) - n0));
  CHECK(worst < 1e-9);
}

TEST_CASE("breathing observable examples") {
  const NlsBench bench(12);
  for (int n : {0, 1}) {
    CHECK(std::abs(measure_breathing(basis_state(n, 12))) < 1e-15);
    CHECK(std::abs(bench.breathing_position(basis_state(n, 12))) < 1e-13);
  }
  const auto f = shifted_gaussian(0.5, 12);
  CHECK(std::abs(measure_breathing(f) - 0.5) < 1e-12);
  CHECK(std::abs(bench.breathing_position(f) - 0.5) < 1e-12);
}

TEST_CASE("position and bilinear breathing agree on random states") {
  std::mt19937_64 rng(44);
  const NlsBench bench(20);
  for (int trial = 0; trial < 10; ++trial) {
    const FieldState f{testing::random_state(rng, 20, 0.9), 0.0};
    CHECK(std::abs(bench.breathing_position(f) - measure_breathing(f)) < 1e-10);
  }
}

TEST_CASE("breathing phase: free and interacting") {
  const auto free = breathing_phase_test(nls_evolve(shifted_gaussian(0.5, 16), 0.0, 20.0, 1e-12, 200));
  CHECK(free.max_modulus_drift < 1e-10);
  CHECK(std::abs(std::abs(free.phase_slope) - 1.0) < 1e-8);
  CHECK(free.phase_slope > 0.0);

  const auto inter = breathing_phase_test(nls_evolve(shifted_gaussian(0.5, 24), 0.05, 20.0, 1e-12, 200));
  CHECK(inter.max_modulus_drift < 1e-6);
  CHECK(std::abs(std::abs(inter.phase_slope) - 1.0) < 1e-6);
}

TEST_CASE("zero breathing is refused") {
  try {
    breathing_phase_test(nls_evolve(basis_state(0, 6), 0.0, 1.0, 1e-10, 5));
    FAIL("expected ZeroBreathing");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kZeroBreathing);
  }
}

TEST_CASE("resonant frame map") {
  FieldState f{{Complex(0.1, 0.2), Complex(-0.3, 0.4)}, 0.0};
  const auto a = to_resonant_frame(f);
  CHECK(a[0] == std::conj(f.coeffs[0]));
  CHECK(a[1] == std::conj(f.coeffs[1]));
  // The free evolution is undone exactly.
  const auto traj = nls_evolve({{0.6, Complex(0, 0.8), 0.0}, 0.0}, 0.0, 7.0, 1e-12, 1);
  const auto b = to_resonant_frame(traj.back());
  CHECK(std::abs(b[0] - 0.6) < 1e-10);
  CHECK(std::abs(b[1] - Complex(0, -0.8)) < 1e-10);
}

TEST_CASE("resonant comparison at g = 0 is exact") {
  FieldState f0{ComplexVector(13), 0.0};
  f0.coeffs[0] = 0.8;
  f0.coeffs[1] = Complex(0, 0.5);
  f0.coeffs[2] = 0.3;
  const auto r = compare_resonant(f0, 0.0, 1.0);
  CHECK(r.metric < 1e-10);
  CHECK(r.samples == 51);
}
