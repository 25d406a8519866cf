#pragma once

#include <cstddef>
#include <vector>

#include "resonant/polyspace.hpp"

namespace resonant {

struct WeightedMonomial {
  Monomial monomial;
  /// Σ_{ā indices} ω_n − Σ_{a indices} ω_n, exact.
  Rational net_frequency;
};

Rational net_frequency(const MonomialKey& key, const Rational& omega0);
std::vector<WeightedMonomial> weigh(const PhasePoly& p, const FrequencyLadder& ladder);

/// Resonant part of a perturbation: the terms whose net frequency vanishes
/// exactly. For a rational ladder this is the average of the free evolution
/// of H1 over a common period.
PhasePoly time_average(const PhasePoly& h1, const FrequencyLadder& ladder);

/// Floating-point entry point; ω₀ must be recognisably rational
/// (kIrrationalLadder otherwise).
PhasePoly time_average(const PhasePoly& h1, double omega0, int n_max);

struct ChannelCensus {
  std::size_t c_terms = 0;      // two ā, two a
  std::size_t s_terms = 0;      // three of one kind, one of the other
  std::size_t other_terms = 0;  // anything that is not quartic
  std::size_t dropped = 0;      // input terms removed by averaging
};

ChannelCensus census(const PhasePoly& averaged, std::size_t dropped);

struct CondB1Result {
  bool holds = true;
  std::vector<Monomial> violating_terms;
};

/// A term is compatible when (deg_a − deg_ā)·ω₀ is an integer, i.e. it is
/// invariant under a_n → a_n e^{2πiω_n}.
CondB1Result check_condB1(const PhasePoly& b1, const Rational& omega0);

struct BreathingOrdersReport {
  PhasePoly zeroth;   // {H₀,B₀} − iB₀
  PhasePoly first;    // {H₀,B₁} + {H₁,B₀} − iB₁
  PhasePoly second;   // {H₁,B₁}; informational only
  double zeroth_max = 0.0;
  double first_max = 0.0;
  double second_max = 0.0;

  bool holds(double tol) const { return zeroth_max <= tol && first_max <= tol; }
};

/// Checks the order-by-order breathing relations. H₀, B₀ must be quadratic,
/// H₁ quartic and B₁ quartic or zero (kDegreeMismatch otherwise).
/// `interior_max_mode` ≥ 0 restricts the residuals to monomials whose indices
/// are all ≤ that bound, for comparing truncated inputs away from the edge.
BreathingOrdersReport verify_breathing_orders(const PhasePoly& h0, const PhasePoly& h1,
                                              const PhasePoly& b0, const PhasePoly& b1,
                                              int interior_max_mode = -1);

/// Multiplies every term by e^{i θ ν}, ν its net frequency.
PhasePoly phase_shift(const PhasePoly& p, double theta, const FrequencyLadder& ladder);

}  // namespace resonant
