#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "resonant/ansatz.hpp"
#include "resonant/couplings.hpp"
#include "resonant/errors.hpp"
#include "resonant/evolution.hpp"

using namespace resonant;

namespace {

double max_diff(std::span<const Complex> x, std::span<const Complex> y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

double max_abs(std::span<const Complex> x) {
  double m = 0.0;
  for (auto v : x) m = std::max(m, std::abs(v));
  return m;
}

const CouplingTensor& conformal32() {
  static const CouplingTensor c = gen_conformal(32);
  return c;
}

ModeState decaying_state(std::uint64_t seed, int n_max, double decay) {
  std::mt19937_64 rng(seed);
  return {testing::random_state(rng, n_max, decay), 0.0};
}

}  // namespace

TEST_CASE("rhs of the empty and single-mode states") {
  const auto c = gen_nls1d(6);
  const auto zero = rhs(c, {ComplexVector(7), 0.0});
  CHECK(max_abs(zero) == 0.0);

  const Complex amp(0.6, -0.8);
  ComplexVector a(7);
  a[0] = amp;
  const auto d = rhs(c, {a, 0.0});
  CHECK(std::abs(d[0] - Complex(0, 1) * c(0, 0, 0, 0) * std::norm(amp) * amp) < 1e-15);
  for (int n = 1; n <= 6; ++n) CHECK(d[n] == Complex(0.0));
}

TEST_CASE("rhs is i times the polynomial gradient in abar") {
  for (const bool conformal : {false, true}) {
    const auto c = conformal ? gen_conformal(9) : gen_nls1d(9);
    const PhasePoly h = c.to_poly();
    const ModeState s = decaying_state(21, 9, 0.9);
    const auto d = rhs(c, s);
    double worst = 0.0;
    for (int n = 0; n <= 9; ++n) {
      worst = std::max(worst, std::abs(d[n] - Complex(0, 1) * evaluate(derivative_abar(h, n), s)));
    }
    CHECK(worst < 1e-12 * std::max(1.0, max_abs(d)));
    CHECK(hamiltonian(c, s) == doctest::Approx(evaluate(h, s).real()).epsilon(1e-13));
    CHECK(std::abs(evaluate(h, s).imag()) < 1e-13);
  }
}

TEST_CASE("rhs matches a finite-difference gradient of H") {
  const auto c = gen_nls1d(8);
  ModeState s = decaying_state(4, 8, 0.8);
  const auto d = rhs(c, s);
  const double h = 1e-6;
  for (int n = 0; n <= 8; ++n) {
    auto shifted = [&](Complex delta) {
      ModeState t = s;
      t.amps[n] += delta;
      return hamiltonian(c, t);
    };
    const double dx = (shifted(h) - shifted(-h)) / (2 * h);
    const double dy = (shifted(Complex(0, h)) - shifted(Complex(0, -h))) / (2 * h);
    const Complex grad_abar = 0.5 * Complex(dx, dy);
    CHECK(std::abs(d[n] - Complex(0, 1) * grad_abar) < 1e-6);
  }
}

TEST_CASE("single-mode phase rotation") {
  const auto c = gen_nls1d(4);
  const Complex amp(0.5, 0.7);
  ModeState s{ComplexVector(5), 0.0};
  s.amps[0] = amp;
  const auto traj = evolve(c, s, 10.0, 1e-12, 10);
  const Complex exact = std::polar(1.0, c(0, 0, 0, 0) * std::norm(amp) * 10.0) * amp;
  CHECK(std::abs(traj.samples.back().amps[0] - exact) < 1e-10);
  CHECK(traj.samples.back().tau == 10.0);
}

TEST_CASE("time reversal by conjugation") {
  const auto& c = conformal32();
  const ModeState s0 = decaying_state(9, 32, 0.7);
  const auto fwd = evolve(c, s0, 5.0, 1e-12, 1).samples.back();
  ModeState back = fwd;
  for (auto& v : back.amps) v = std::conj(v);
  back.tau = 0.0;
  auto end = evolve(c, back, 5.0, 1e-12, 1).samples.back();
  for (auto& v : end.amps) v = std::conj(v);
  CHECK(max_diff(end.amps, s0.amps) < 1e-8);
}

TEST_CASE("endpoint error falls as the tolerance tightens") {
  const auto c = gen_conformal(16);
  const ModeState s0 = decaying_state(2, 16, 0.75);
  const auto ref = evolve(c, s0, 10.0, 1e-13, 1).samples.back();
  double prev = 1e300;
  for (double tol : {1e-7, 1e-8, 1e-9, 1e-10, 1e-11}) {
    const double err = max_diff(evolve(c, s0, 10.0, tol, 1).samples.back().amps, ref.amps);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("tolerance outside the supported range") {
  const auto c = gen_nls1d(2);
  const ModeState s{ComplexVector(3, 0.1), 0.0};
  CHECK_THROWS_AS(evolve(c, s, 1.0, 1e-14), Error);
  CHECK_THROWS_AS(evolve(c, s, 1.0, 1e-5), Error);
  CHECK_THROWS_AS(evolve(c, {ComplexVector(4), 0.0}, 1.0, 1e-10), Error);
}

TEST_CASE("N and E are conserved along any trajectory") {
  const auto& c = conformal32();
  const auto bv = BreathingVector::from_lambda(find_G(c).lambda, 32);
  const auto traj = evolve(c, decaying_state(13, 32, 0.85), 20.0, 1e-10, 40);
  const auto rep = conserved_report(traj, c, bv);
  CHECK(rep.samples.size() == 41);
  CHECK(rep.n_drift < 1e-8);
  CHECK(rep.e_drift < 1e-8);
  CHECK(rep.h_drift < 1e-8);
  CHECK(rep.bound_holds);
}

TEST_CASE("B0 is conserved for tail-suppressed family data") {
  const auto& c = conformal32();
  const double lambda = find_G(c).lambda;
  const auto bv = BreathingVector::from_lambda(lambda, 32);
  const auto s0 = ansatz_state({1.0, Complex(0, 0.4), 0.3, lambda}, 32);
  const auto rep = conserved_report(evolve(c, s0, 20.0, 1e-10, 40), c, bv);
  CHECK(rep.b0_drift < 1e-6);
}

TEST_CASE("the B0 bracket closes on N and E along a trajectory") {
  const auto& c = conformal32();
  const double lambda = find_G(c).lambda;
  const auto bv = BreathingVector::from_lambda(lambda, 32);
  const std::vector<double> beta(bv.values().begin(), bv.values().end() - 1);
  const PhasePoly b0 = breathing_poly(beta);
  const PhasePoly closure = poisson_bracket(conjugate(b0), b0);
  const auto traj = evolve(c, ansatz_state({0.8, 0.3, Complex(0.2, 0.2), lambda}, 32), 10.0, 1e-10, 10);
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    const Complex expected(0.0, number(s.amps) + 2.0 * lambda * energy(s.amps));
    worst = std::max(worst, std::abs(evaluate(closure, s) - expected));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("violating the coupling identity breaks B0 but not N, E") {
  CouplingTensor c = gen_nls1d(12);
  const auto bv = BreathingVector::from_lambda(0.0, 12);
  const auto s0 = ansatz_state({1.0, 0.5, 0.3, 0.0}, 12);
  const auto good = conserved_report(evolve(c, s0, 10.0, 1e-10, 20), c, bv);
  c.set(0, 1, 0, 1, c(0, 1, 0, 1) + 1e-2);
  const auto bad = conserved_report(evolve(c, s0, 10.0, 1e-10, 20), c, bv);
  CHECK(good.b0_drift < 1e-6);
  CHECK(bad.b0_drift > 1e-4);
  CHECK(bad.n_drift < 1e-8);
  CHECK(bad.e_drift < 1e-8);
}

TEST_CASE("breathing transform is a first-order symmetry of H_res") {
  const auto c = gen_nls1d(16);
  const auto bv = BreathingVector::from_lambda(0.0, 16);
  const ModeState s = ansatz_state({1.0, Complex(0.2, 0.1), Complex(0.3, -0.1), 0.0}, 16);
  CHECK(max_diff(breathing_transform(s, 0.0, bv).amps, s.amps) == 0.0);

  const double h0 = hamiltonian(c, s), n0 = number(s.amps);
  const Complex eta(0.04, 0.03);
  auto dh = [&](Complex e) { return std::abs(hamiltonian(c, breathing_transform(s, e, bv)) - h0); };
  auto dn = [&](Complex e) { return std::abs(number(breathing_transform(s, e, bv).amps) - n0); };
  const double h_ratio = dh(eta) / dh(eta / 2.0);
  const double n_ratio = dn(eta) / dn(eta / 2.0);
  CHECK(h_ratio == doctest::Approx(4.0).epsilon(1.5 / 4.0));
  CHECK(n_ratio == doctest::Approx(4.0).epsilon(1.5 / 4.0));
  CHECK_THROWS_AS(breathing_transform(s, 0.2, bv), Error);
}

TEST_CASE("repeated runs are bit-identical") {
  const auto c = gen_conformal(12);
  const ModeState s0 = decaying_state(1, 12, 0.8);
  const auto x = evolve(c, s0, 3.0, 1e-10, 5);
  const auto y = evolve(c, s0, 3.0, 1e-10, 5);
  for (std::size_t i = 0; i < x.samples.size(); ++i) CHECK(x.samples[i].amps == y.samples[i].amps);
}
