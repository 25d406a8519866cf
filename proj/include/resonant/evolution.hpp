#pragma once

#include <span>
#include <vector>

#include "resonant/couplings.hpp"
#include "resonant/ode.hpp"
#include "resonant/state.hpp"

namespace resonant {

/// Right-hand side of the truncated resonant system,
///   da_n/dτ = i Σ_m Σ_k C_{n,m,k,n+m−k} ā_m a_k a_{n+m−k},
/// with every index confined to [0, n_max].
///
/// Holds the pair products a_k a_{s−k} in split real/imaginary rows so that
/// each F_n is one weighted row-block kernel call against slab block n of C.
/// The loop over n runs in parallel; each F_n is reduced by a single thread in a
/// fixed order, so results do not depend on the thread count.
class ResonantRhs {
 public:
  explicit ResonantRhs(const CouplingTensor& c);

  int n_max() const { return n_max_; }

  /// F_n = Σ_m ā_m Σ_k C_{n,m,k,·} a_k a_{n+m−k}, so that da_n/dτ = i F_n.
  void contract(std::span<const Complex> a, std::span<Complex> f) const;
  void operator()(std::span<const Complex> a, std::span<Complex> dadt) const;

  /// H_res = ½ Σ_n ā_n F_n.
  double hamiltonian(std::span<const Complex> a) const;

 private:
  void fill_pairs(std::span<const Complex> a) const;

  int n_max_;
  std::vector<double> slab_;
  mutable std::vector<double> pair_re_;  // [s][k] = Re(a_k a_{s−k})
  mutable std::vector<double> pair_im_;
};

ComplexVector rhs(const CouplingTensor& c, const ModeState& s);
double hamiltonian(const CouplingTensor& c, const ModeState& s);
double number(std::span<const Complex> a);
double energy(std::span<const Complex> a);
/// B₀ = Σ β_n ā_n a_{n+1}.
Complex breathing(std::span<const Complex> a, const BreathingVector& bv);

struct Trajectory {
  std::vector<ModeState> samples;
  OdeStats stats;
};

/// Throws kInvalidArgument unless tol ∈ [1e-13, 1e-6].
Trajectory evolve(const CouplingTensor& c, const ModeState& s0, std::span<const double> sample_times,
                  double tol);
/// `samples` + 1 equally spaced points from s0.tau to tau_end.
Trajectory evolve(const CouplingTensor& c, const ModeState& s0, double tau_end, double tol,
                  int samples = 100);

struct ConservedSample {
  double tau = 0.0;
  double n = 0.0;
  double e = 0.0;
  double h = 0.0;
  Complex b0;
  double b0_bound = 0.0;  // Σ β_n |a_n| |a_{n+1}|
};

struct ConservedReport {
  std::vector<ConservedSample> samples;
  /// max_τ |X(τ) − X(0)| / |X(0)|; absolute when X(0) = 0.
  double n_drift = 0.0;
  double e_drift = 0.0;
  double h_drift = 0.0;
  double b0_drift = 0.0;
  /// |B₀| ≤ Σ β_n |a_n| |a_{n+1}| at every sample.
  bool bound_holds = true;
};

ConservedReport conserved_report(const Trajectory& traj, const CouplingTensor& c,
                                 const BreathingVector& bv);

/// a_n → a_n + iηβ_n a_{n+1} + iη̄β_{n−1} a_{n−1}, first order in η.
/// Throws kInvalidArgument for |η| > 0.1.
ModeState breathing_transform(const ModeState& s, Complex eta, const BreathingVector& bv);

}  // namespace resonant
