#include "resonant/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "resonant/errors.hpp"
#include "resonant/kernels.hpp"

namespace resonant {

ResonantRhs::ResonantRhs(const CouplingTensor& c)
    : n_max_(c.n_max()), slab_(c.slab().begin(), c.slab().end()) {
  const std::size_t w = static_cast<std::size_t>(n_max_) + 1;
  pair_re_.assign((2 * w - 1) * w, 0.0);
  pair_im_.assign(pair_re_.size(), 0.0);
}

void ResonantRhs::fill_pairs(std::span<const Complex> a) const {
  const int w = n_max_ + 1;
  for (int s = 0; s <= 2 * n_max_; ++s) {
    double* re = pair_re_.data() + static_cast<std::size_t>(s) * w;
    double* im = pair_im_.data() + static_cast<std::size_t>(s) * w;
    const int lo = std::max(0, s - n_max_), hi = std::min(s, n_max_);
    for (int k = lo; k <= hi; ++k) {
      const Complex p = a[k] * a[s - k];
      re[k] = p.real();
      im[k] = p.imag();
    }
  }
}

void ResonantRhs::contract(std::span<const Complex> a, std::span<Complex> f) const {
  const int w = n_max_ + 1;
  if (static_cast<int>(a.size()) != w || static_cast<int>(f.size()) != w) {
    throw Error(ErrorCode::kInvalidArgument, "state size does not match the coupling tensor");
  }
  fill_pairs(a);
  const auto rows = simd::active().weighted_rows;
  const std::size_t ws = static_cast<std::size_t>(w);
  std::vector<double> cre(ws), cim(ws);
  for (std::size_t m = 0; m < ws; ++m) {
    cre[m] = a[m].real();
    cim[m] = -a[m].imag();
  }
  // Row m of slab block n meets pair row n+m; both advance by ws per m.
#pragma omp parallel for schedule(static)
  for (int n = 0; n < w; ++n) {
    const std::size_t s = static_cast<std::size_t>(n) * ws;
    const auto d = rows(slab_.data() + s * ws, pair_re_.data() + s, pair_im_.data() + s, ws, ws, ws,
                        cre.data(), cim.data());
    f[n] = Complex(d.re, d.im);
  }
}

void ResonantRhs::operator()(std::span<const Complex> a, std::span<Complex> dadt) const {
  contract(a, dadt);
  for (auto& v : dadt) v = Complex(-v.imag(), v.real());
}

double ResonantRhs::hamiltonian(std::span<const Complex> a) const {
  ComplexVector f(a.size());
  contract(a, f);
  double h = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) h += (std::conj(a[n]) * f[n]).real();
  return 0.5 * h;
}

ComplexVector rhs(const CouplingTensor& c, const ModeState& s) {
  ComplexVector out(s.amps.size());
  const ResonantRhs f(c);
  f(s.amps, out);
  return out;
}

double hamiltonian(const CouplingTensor& c, const ModeState& s) {
  return ResonantRhs(c).hamiltonian(s.amps);
}

double number(std::span<const Complex> a) {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return s;
}

double energy(std::span<const Complex> a) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += static_cast<double>(n) * std::norm(a[n]);
  return s;
}

Complex breathing(std::span<const Complex> a, const BreathingVector& bv) {
  Complex s = 0.0;
  for (std::size_t n = 0; n + 1 < a.size(); ++n) s += bv.beta(static_cast<int>(n)) * std::conj(a[n]) * a[n + 1];
  return s;
}

Trajectory evolve(const CouplingTensor& c, const ModeState& s0, std::span<const double> sample_times,
                  double tol) {
  if (!(tol >= 1e-13 && tol <= 1e-6)) {
    throw Error(ErrorCode::kInvalidArgument, "tol must lie in [1e-13, 1e-6]");
  }
  if (s0.n_max() != c.n_max()) {
    throw Error(ErrorCode::kInvalidArgument, "state n_max does not match the coupling tensor");
  }
  const ResonantRhs f(c);
  const OdeSystem sys = [&f](double, const ComplexVector& y, ComplexVector& dy) { f(y, dy); };
  Trajectory traj;
  OdeOptions opt;
  opt.tol = tol;
  auto ys = dopri5(sys, s0.amps, s0.tau, sample_times, opt, &traj.stats);
  traj.samples.reserve(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) traj.samples.push_back({std::move(ys[i]), sample_times[i]});
  return traj;
}

Trajectory evolve(const CouplingTensor& c, const ModeState& s0, double tau_end, double tol,
                  int samples) {
  if (samples < 1 || !(tau_end >= s0.tau)) {
    throw Error(ErrorCode::kInvalidArgument, "need samples >= 1 and tau_end >= tau0");
  }
  std::vector<double> times(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) times[i] = s0.tau + (tau_end - s0.tau) * i / samples;
  times.back() = tau_end;
  return evolve(c, s0, times, tol);
}

ConservedReport conserved_report(const Trajectory& traj, const CouplingTensor& c,
                                 const BreathingVector& bv) {
  ConservedReport r;
  const ResonantRhs f(c);
  for (const auto& s : traj.samples) {
    ConservedSample x;
    x.tau = s.tau;
    x.n = number(s.amps);
    x.e = energy(s.amps);
    x.h = f.hamiltonian(s.amps);
    x.b0 = breathing(s.amps, bv);
    for (std::size_t n = 0; n + 1 < s.amps.size(); ++n) {
      x.b0_bound += bv.beta(static_cast<int>(n)) * std::abs(s.amps[n]) * std::abs(s.amps[n + 1]);
    }
    if (std::abs(x.b0) > x.b0_bound * (1.0 + 1e-12) + 1e-300) r.bound_holds = false;
    r.samples.push_back(x);
  }
  if (r.samples.empty()) return r;
  const auto& s0 = r.samples.front();
  auto rel = [](auto now, auto then) {
    const double d = std::abs(now - then);
    return std::abs(then) > 0.0 ? d / std::abs(then) : d;
  };
  for (const auto& x : r.samples) {
    r.n_drift = std::max(r.n_drift, rel(x.n, s0.n));
    r.e_drift = std::max(r.e_drift, rel(x.e, s0.e));
    r.h_drift = std::max(r.h_drift, rel(x.h, s0.h));
    r.b0_drift = std::max(r.b0_drift, rel(x.b0, s0.b0));
  }
  return r;
}

ModeState breathing_transform(const ModeState& s, Complex eta, const BreathingVector& bv) {
  if (std::abs(eta) > 0.1) throw Error(ErrorCode::kInvalidArgument, "|eta| must be <= 0.1");
  const int n_max = s.n_max();
  ModeState out{ComplexVector(s.amps.size()), s.tau};
  const Complex ie(0.0, 1.0);
  for (int n = 0; n <= n_max; ++n) {
    Complex v = s.amps[n];
    if (n + 1 <= n_max) v += ie * eta * bv.beta(n) * s.amps[n + 1];
    if (n >= 1) v += ie * std::conj(eta) * bv.beta(n - 1) * s.amps[n - 1];
    out.amps[n] = v;
  }
  return out;
}

}  // namespace resonant
