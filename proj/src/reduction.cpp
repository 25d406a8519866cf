#include "resonant/reduction.hpp"

#include <cmath>

#include "resonant/errors.hpp"

namespace resonant {

Rational net_frequency(const MonomialKey& key, const Rational& omega0) {
  // Σ_ā (ω₀ + n) − Σ_a (ω₀ + n)
  std::int64_t index_sum = 0;
  for (int i : key.abar) index_sum += i;
  for (int i : key.a) index_sum -= i;
  return Rational(-key.imbalance()) * omega0 + Rational(index_sum);
}

std::vector<WeightedMonomial> weigh(const PhasePoly& p, const FrequencyLadder& ladder) {
  std::vector<WeightedMonomial> out;
  out.reserve(p.size());
  for (const auto& [key, c] : p.terms()) {
    out.push_back({Monomial{key, c}, net_frequency(key, ladder.omega0())});
  }
  return out;
}

PhasePoly time_average(const PhasePoly& h1, const FrequencyLadder& ladder) {
  PhasePoly::TermMap kept;
  for (const auto& [key, c] : h1.terms()) {
    if (key.max_index() > ladder.n_max()) {
      throw Error(ErrorCode::kInvalidArgument, "term index beyond the ladder's n_max");
    }
    if (net_frequency(key, ladder.omega0()) == Rational(0)) kept.emplace(key, c);
  }
  return PhasePoly(std::move(kept), h1.max_mode());
}

PhasePoly time_average(const PhasePoly& h1, double omega0, int n_max) {
  return time_average(h1, FrequencyLadder(rational_from_real(omega0), n_max));
}

ChannelCensus census(const PhasePoly& averaged, std::size_t dropped) {
  ChannelCensus c;
  c.dropped = dropped;
  for (const auto& [key, coeff] : averaged.terms()) {
    if (key.degree() != 4) {
      ++c.other_terms;
    } else if (key.abar.size() == 2) {
      ++c.c_terms;
    } else if (key.abar.size() == 1 || key.abar.size() == 3) {
      ++c.s_terms;
    } else {
      ++c.other_terms;
    }
  }
  return c;
}

CondB1Result check_condB1(const PhasePoly& b1, const Rational& omega0) {
  CondB1Result r;
  for (const auto& [key, c] : b1.terms()) {
    const Rational charge = Rational(key.imbalance()) * omega0;
    if (charge.denominator() != 1) {
      r.holds = false;
      r.violating_terms.push_back({key, c});
    }
  }
  return r;
}

BreathingOrdersReport verify_breathing_orders(const PhasePoly& h0, const PhasePoly& h1,
                                              const PhasePoly& b0, const PhasePoly& b1,
                                              int interior_max_mode) {
  if (!h0.is_homogeneous(2)) throw Error(ErrorCode::kDegreeMismatch, "H0 must be quadratic");
  if (!b0.is_homogeneous(2)) throw Error(ErrorCode::kDegreeMismatch, "B0 must be quadratic");
  if (!h1.is_homogeneous(4)) throw Error(ErrorCode::kDegreeMismatch, "H1 must be quartic");
  if (!b1.is_homogeneous(4)) throw Error(ErrorCode::kDegreeMismatch, "B1 must be quartic or zero");

  const Complex i{0.0, 1.0};
  auto window = [interior_max_mode](const PhasePoly& p) {
    return interior_max_mode >= 0 ? restrict_modes(p, interior_max_mode) : p;
  };
  BreathingOrdersReport rep;
  rep.zeroth = window(poisson_bracket(h0, b0) - i * b0);
  rep.first = window(poisson_bracket(h0, b1) + poisson_bracket(h1, b0) - i * b1);
  rep.second = window(poisson_bracket(h1, b1));
  rep.zeroth_max = rep.zeroth.max_abs_coeff();
  rep.first_max = rep.first.max_abs_coeff();
  rep.second_max = rep.second.max_abs_coeff();
  return rep;
}

PhasePoly phase_shift(const PhasePoly& p, double theta, const FrequencyLadder& ladder) {
  PhasePoly::TermMap t;
  for (const auto& [key, c] : p.terms()) {
    const double nu = boost::rational_cast<double>(net_frequency(key, ladder.omega0()));
    t.emplace(key, nu == 0.0 ? c : c * std::polar(1.0, theta * nu));
  }
  return PhasePoly(std::move(t), p.max_mode());
}

}  // namespace resonant
