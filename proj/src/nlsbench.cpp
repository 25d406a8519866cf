#include "resonant/nlsbench.hpp"

#include <cmath>
#include <numbers>

#include "resonant/couplings.hpp"
#include "resonant/errors.hpp"
#include "resonant/evolution.hpp"

namespace resonant {

namespace {

double omega(int n) { return n + 0.5; }

std::vector<double> uniform_times(double t0, double t_end, int samples) {
  if (samples < 1 || !(t_end >= t0)) {
    throw Error(ErrorCode::kInvalidArgument, "need samples >= 1 and t_end >= t0");
  }
  std::vector<double> t(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) t[i] = t0 + (t_end - t0) * i / samples;
  t.back() = t_end;
  return t;
}

}  // namespace

FieldState shifted_gaussian(double d, int n_max) {
  if (n_max < 0) throw Error(ErrorCode::kInvalidArgument, "n_max must be non-negative");
  FieldState f{ComplexVector(static_cast<std::size_t>(n_max) + 1), 0.0};
  const double alpha = d / std::numbers::sqrt2;
  double c = std::exp(-0.25 * d * d);
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) c *= alpha / std::sqrt(static_cast<double>(n));
    f.coeffs[n] = c;
  }
  return f;
}

NlsBench::NlsBench(int n_max)
    : n_max_(n_max),
      dealiased_(n_max, 2 * n_max + 16, HermiteGrid::Kind::kDealiased),
      standard_(n_max, 2 * n_max + 16, HermiteGrid::Kind::kStandard) {}

ComplexVector NlsBench::cubic(std::span<const Complex> c) const {
  ComplexVector psi = dealiased_.to_grid(c);
  for (auto& v : psi) v *= std::norm(v);
  return dealiased_.to_coeffs(psi);
}

std::vector<FieldState> NlsBench::evolve(const FieldState& f0, double g, std::span<const double> times,
                                         double tol, OdeStats* stats) const {
  if (!(g >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "g must be >= 0");
  if (f0.n_max() != n_max_) throw Error(ErrorCode::kGridMismatch, "field n_max does not match the bench");
  const int w = n_max_ + 1;
  ComplexVector u0(w);
  for (int n = 0; n < w; ++n) u0[n] = std::polar(1.0, omega(n) * f0.t) * f0.coeffs[n];

  ComplexVector c(w);
  const OdeSystem sys = [&](double t, const ComplexVector& u, ComplexVector& du) {
    for (int n = 0; n < w; ++n) c[n] = std::polar(1.0, -omega(n) * t) * u[n];
    const ComplexVector nl = cubic(c);
    for (int n = 0; n < w; ++n) du[n] = std::polar(1.0, omega(n) * t) * Complex(0.0, -g) * nl[n];
  };
  OdeOptions opt;
  opt.tol = tol;
  const auto us = dopri5(sys, u0, f0.t, times, opt, stats);
  std::vector<FieldState> out;
  out.reserve(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) {
    FieldState f{ComplexVector(w), times[i]};
    for (int n = 0; n < w; ++n) f.coeffs[n] = std::polar(1.0, -omega(n) * times[i]) * us[i][n];
    out.push_back(std::move(f));
  }
  return out;
}

Complex NlsBench::breathing_position(const FieldState& f) const {
  if (f.n_max() != n_max_) throw Error(ErrorCode::kGridMismatch, "field n_max does not match the bench");
  // ∂ₓh_n = −x h_n + √(2n) h_{n−1}.
  ComplexVector shifted(f.coeffs.size(), 0.0);
  for (int n = 1; n <= n_max_; ++n) shifted[n - 1] = std::sqrt(2.0 * n) * f.coeffs[n];
  const ComplexVector psi = standard_.to_grid(f.coeffs);
  const ComplexVector part = standard_.to_grid(shifted);
  const auto x = standard_.x();
  const auto w = standard_.weights();
  Complex b = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const Complex dpsi = part[j] - x[j] * psi[j];
    b += w[j] * (x[j] * std::norm(psi[j]) - std::conj(psi[j]) * dpsi);
  }
  return b;
}

std::vector<FieldState> nls_evolve(const FieldState& f0, double g, double t_end, double tol,
                                   int samples) {
  const auto times = uniform_times(f0.t, t_end, samples);
  return NlsBench(f0.n_max()).evolve(f0, g, times, tol);
}

Complex measure_breathing(const FieldState& f) {
  Complex b = 0.0;
  for (std::size_t n = 0; n + 1 < f.coeffs.size(); ++n) {
    b += std::sqrt(static_cast<double>(n + 1)) * std::conj(f.coeffs[n + 1]) * f.coeffs[n];
  }
  return std::numbers::sqrt2 * b;
}

BreathingPhaseReport breathing_phase_test(const std::vector<FieldState>& traj) {
  if (traj.empty()) throw Error(ErrorCode::kInvalidArgument, "empty trajectory");
  const Complex b0 = measure_breathing(traj.front());
  if (std::abs(b0) < 1e-12) throw Error(ErrorCode::kZeroBreathing, "|B(0)| < 1e-12");
  BreathingPhaseReport r;
  std::vector<double> t, phase;
  double prev = std::arg(b0), unwrapped = prev;
  for (const auto& f : traj) {
    const Complex b = measure_breathing(f);
    r.max_modulus_drift = std::max(r.max_modulus_drift, std::abs(std::abs(b) - std::abs(b0)) / std::abs(b0));
    const double ph = std::arg(b);
    double step = ph - prev;
    step -= 2.0 * std::numbers::pi * std::round(step / (2.0 * std::numbers::pi));
    unwrapped += step;
    prev = ph;
    t.push_back(f.t);
    phase.push_back(unwrapped);
  }
  if (t.size() < 2) return r;
  double mt = 0.0, mp = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) mt += t[i], mp += phase[i];
  mt /= t.size();
  mp /= t.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sxy += (t[i] - mt) * (phase[i] - mp);
    sxx += (t[i] - mt) * (t[i] - mt);
  }
  r.phase_slope = sxy / sxx;
  return r;
}

ComplexVector to_resonant_frame(const FieldState& f) {
  ComplexVector a(f.coeffs.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    a[n] = std::conj(std::polar(1.0, omega(static_cast<int>(n)) * f.t) * f.coeffs[n]);
  }
  return a;
}

ResonantComparison compare_resonant(const FieldState& f0, double g, double horizon,
                                    const CompareOptions& options) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::kInvalidArgument, "horizon must be positive");
  const int n_max = f0.n_max();
  const double span = g > 0.0 ? horizon / g : horizon;
  const auto times = uniform_times(f0.t, f0.t + span, options.samples);
  const auto full = NlsBench(n_max).evolve(f0, g, times, options.tol);

  std::vector<ComplexVector> reference;
  const ComplexVector a0 = to_resonant_frame(f0);
  if (g > 0.0) {
    std::vector<double> tau(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) tau[i] = g * (times[i] - f0.t);
    const auto traj = evolve(gen_nls1d(n_max), ModeState{a0, 0.0}, tau, std::max(options.tol, 1e-13));
    for (const auto& s : traj.samples) reference.push_back(s.amps);
  } else {
    reference.assign(times.size(), a0);
  }

  ResonantComparison r;
  r.samples = static_cast<int>(times.size());
  const double n0 = number(a0), e0 = energy(a0);
  for (std::size_t i = 0; i < full.size(); ++i) {
    const ComplexVector a = to_resonant_frame(full[i]);
    for (std::size_t n = 0; n < a.size(); ++n) {
      r.metric = std::max(r.metric, std::abs(std::abs(a[n]) - std::abs(reference[i][n])));
    }
    r.n_drift = std::max(r.n_drift, std::abs(number(a) - n0) / n0);
    r.e_drift = std::max(r.e_drift, e0 > 0.0 ? std::abs(energy(a) - e0) / e0 : std::abs(energy(a)));
  }
  return r;
}

}  // namespace resonant
