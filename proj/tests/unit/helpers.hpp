#pragma once

#include <random>
#include <vector>

#include "resonant/polyspace.hpp"

namespace resonant::testing {

// Random sparse polynomial of the given degree on modes 0..max_mode with small
// integer coefficients, so bracket identities hold exactly in floating point.
inline PhasePoly random_poly(std::mt19937_64& rng, int degree, int max_mode, int terms) {
  std::uniform_int_distribution<int> mode(0, max_mode), split(0, degree), coef(-3, 3);
  PhasePoly::TermMap t;
  for (int i = 0; i < terms; ++i) {
    const int nbar = split(rng);
    std::vector<int> abar, a;
    for (int j = 0; j < nbar; ++j) abar.push_back(mode(rng));
    for (int j = nbar; j < degree; ++j) a.push_back(mode(rng));
    t[MonomialKey(abar, a)] += Complex(coef(rng), coef(rng));
  }
  return PhasePoly(std::move(t), max_mode);
}

inline ComplexVector random_state(std::mt19937_64& rng, int n_max, double decay = 1.0) {
  std::normal_distribution<double> g;
  ComplexVector a(static_cast<std::size_t>(n_max) + 1);
  double s = 1.0;
  for (auto& v : a) {
    v = s * Complex(g(rng), g(rng));
    s *= decay;
  }
  return a;
}

}  // namespace resonant::testing
