#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "resonant/errors.hpp"
#include "resonant/polyspace.hpp"

using namespace resonant;
using resonant::testing::random_poly;

namespace {

PhasePoly t(Complex c, std::vector<int> abar, std::vector<int> a, int max_mode = 4) {
  return PhasePoly::term(c, std::move(abar), std::move(a), max_mode);
}

double max_diff(const PhasePoly& p, const PhasePoly& q) { return (p - q).max_abs_coeff(); }

std::vector<double> random_beta(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::vector<double> b(static_cast<std::size_t>(n));
  for (auto& x : b) x = u(rng);
  return b;
}

}  // namespace

TEST_CASE("addition merges, cancels and keeps the identity") {
  const PhasePoly p = t(2.0, {0}, {1});
  CHECK(max_diff(p + PhasePoly(4), p) == 0.0);
  CHECK((p + t(-2.0, {0}, {1})).is_zero());
  const PhasePoly twice = t(1.0, {0}, {1}) + t(1.0, {0}, {1});
  CHECK(twice.size() == 1);
  CHECK(twice.coeff(MonomialKey({0}, {1})) == Complex(2.0));
}

TEST_CASE("multiplication distributes and merges like terms") {
  const PhasePoly one = PhasePoly::constant(1.0, 4);
  const PhasePoly p = t(Complex(1, 2), {0}, {1});
  CHECK(max_diff(p * one, p) == 0.0);
  const PhasePoly prod = t(1.0, {0}, {1}) * t(1.0, {1}, {0});
  CHECK(prod.size() == 1);
  CHECK(prod.coeff(MonomialKey({0, 1}, {0, 1})) == Complex(1.0));
  const PhasePoly s = t(1.0, {}, {0}) + t(1.0, {}, {1});
  const PhasePoly sq = s * s;
  CHECK(sq.size() == 3);
  CHECK(sq.coeff(MonomialKey({}, {0, 0})) == Complex(1.0));
  CHECK(sq.coeff(MonomialKey({}, {0, 1})) == Complex(2.0));
  CHECK(sq.coeff(MonomialKey({}, {1, 1})) == Complex(1.0));
}

TEST_CASE("terms beyond max_mode are dropped and counted") {
  PolyAccumulator acc(2);
  acc.add(MonomialKey({0}, {2}), 1.0);
  acc.add(MonomialKey({3}, {0}), 1.0);
  acc.add(MonomialKey({}, {1, 5}), 1.0);
  const PhasePoly p = std::move(acc).build();
  CHECK(p.size() == 1);
  CHECK(p.truncated() == 2);
  CHECK(poly_add(p, t(1.0, {3}, {}, 3)).max_mode() == 3);
  CHECK(restrict_modes(t(1.0, {3}, {0}, 3), 2).is_zero());
}

TEST_CASE("two-mode breathing bracket by hand") {
  const PhasePoly b = t(1.0, {0}, {1});
  const PhasePoly r = poisson_bracket(conjugate(b), b);
  const PhasePoly expected = t(Complex(0, 1), {0}, {0}) + t(Complex(0, -1), {1}, {1});
  CHECK(max_diff(r, expected) == 0.0);
}

TEST_CASE("ladder Hamiltonian rotates the breathing polynomial: {H0,B0} = iB0") {
  std::mt19937_64 rng(11);
  for (const Rational w0 : {Rational(1, 2), Rational(1), Rational(3, 2)}) {
    const int n_max = 16;
    const auto beta = random_beta(rng, n_max);
    const PhasePoly h0 = ladder_hamiltonian(FrequencyLadder(w0, n_max));
    const PhasePoly b0 = breathing_poly(beta);
    const PhasePoly r = poisson_bracket(h0, b0) - Complex(0, 1) * b0;
    CHECK(r.max_abs_coeff() < 1e-12);
  }
}

TEST_CASE("N commutes with phase-balanced polynomials") {
  std::mt19937_64 rng(5);
  const PhasePoly n = number_poly(5);
  for (int trial = 0; trial < 10; ++trial) {
    PhasePoly::TermMap terms;
    const PhasePoly raw = random_poly(rng, 4, 5, 12);
    for (const auto& [key, c] : raw.terms()) {
      if (key.abar.size() == 2) terms[key] = c;
    }
    const PhasePoly h(std::move(terms), 5);
    CHECK(poisson_bracket(n, h).is_zero());
  }
}

TEST_CASE("bracket algebra on random polynomials") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 8; ++trial) {
    const PhasePoly f = random_poly(rng, 3, 4, 6);
    const PhasePoly g = random_poly(rng, 3, 4, 6);
    const PhasePoly k = random_poly(rng, 2, 4, 5);
    // antisymmetry
    CHECK(max_diff(poisson_bracket(f, g), -poisson_bracket(g, f)) == 0.0);
    {  // Jacobi
      const PhasePoly j = poisson_bracket(f, poisson_bracket(g, k)) +
                          poisson_bracket(g, poisson_bracket(k, f)) +
                          poisson_bracket(k, poisson_bracket(f, g));
      CHECK(j.max_abs_coeff() == 0.0);
    }
    {  // Leibniz
      const PhasePoly lhs = poisson_bracket(f, g * k);
      const PhasePoly rhs = poisson_bracket(f, g) * k + g * poisson_bracket(f, k);
      CHECK(max_diff(lhs, rhs) == 0.0);
    }
    {
      // Conjugation swaps a ↔ ā and conjugates coefficients; with this bracket
      // it is a homomorphism: conj{F,G} = {conj F, conj G}.
      const PhasePoly lhs = conjugate(poisson_bracket(f, g));
      CHECK(max_diff(lhs, poisson_bracket(conjugate(f), conjugate(g))) == 0.0);
    }
  }
}

TEST_CASE("evaluate N, E and a sample polynomial") {
  ComplexVector s(4, 0.0);
  s[0] = 1.0;
  CHECK(evaluate(number_poly(3), s) == Complex(1.0));
  s = ComplexVector(4, 0.0);
  s[1] = 1.0;
  CHECK(evaluate(energy_poly(3), s) == Complex(1.0));
  const PhasePoly p = t(Complex(0, 2), {0}, {1, 1});
  const ComplexVector x = {Complex(1, 1), Complex(0, 2), 0.0, 0.0};
  CHECK(std::abs(evaluate(p, x) - Complex(0, 2) * std::conj(x[0]) * x[1] * x[1]) < 1e-15);
}

TEST_CASE("derivatives") {
  const PhasePoly p = t(3.0, {0, 0}, {1});
  CHECK(max_diff(derivative_abar(p, 0), t(6.0, {0}, {1})) == 0.0);
  CHECK(max_diff(derivative_a(p, 1), t(3.0, {0, 0}, {})) == 0.0);
  CHECK(derivative_a(p, 0).is_zero());
}

TEST_CASE("exact rationals") {
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-4/6") == Rational(-2, 3));
  CHECK_THROWS_AS(parse_rational("0.333"), Error);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK(rational_from_real(0.5) == Rational(1, 2));
  CHECK(rational_from_real(1.0 / 3.0) == Rational(1, 3));
  CHECK_THROWS_AS(rational_from_real(std::sqrt(2.0)), Error);
  CHECK_THROWS_AS(FrequencyLadder(Rational(0), 3), Error);
}

TEST_CASE("polynomial text round trip") {
  std::mt19937_64 rng(9);
  const PhasePoly p = scale(random_poly(rng, 4, 6, 20), Complex(0.1, -1.0 / 3.0));
  std::stringstream ss;
  write_poly(ss, p);
  const PhasePoly q = read_poly(ss, 6);
  CHECK(max_diff(p, q) == 0.0);
  CHECK(q.size() == p.size());
}

TEST_CASE("malformed polynomial text reports the line") {
  std::stringstream ss("1 0 | abar: 0 | a: 1\n1 0 | abar: x | a: 1\n");
  try {
    read_poly(ss);
    FAIL("expected FormatError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFormatError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::stringstream big("1 0 | abar: 9 | a: 1\n");
  CHECK_THROWS_AS(read_poly(big, 4), Error);
}
