#pragma once

#include <span>
#include <vector>

#include "resonant/hermite.hpp"
#include "resonant/ode.hpp"
#include "resonant/state.hpp"

namespace resonant {

/// Ψ(x, t) = Σ c_n(t) h_n(x) for the trapped equation
///   i ∂ₜΨ = ½(−∂ₓ² + x²)Ψ + g|Ψ|²Ψ,
/// whose linear modes evolve as e^{−iω_n t}, ω_n = n + ½.
struct FieldState {
  ComplexVector coeffs;
  double t = 0.0;

  int n_max() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// h₀(x − d) in the Hermite basis: c_n = e^{−d²/4} (d/√2)ⁿ / √(n!).
FieldState shifted_gaussian(double d, int n_max);

/// Bench grids for one truncation: the dealiased grid for the cubic term and
/// the standard grid for position-space observables, both with 2·n_max + 16 nodes.
class NlsBench {
 public:
  explicit NlsBench(int n_max);

  int n_max() const { return n_max_; }
  const HermiteGrid& dealiased() const { return dealiased_; }
  const HermiteGrid& standard() const { return standard_; }

  /// Projection of |Ψ|²Ψ onto h_0..h_{n_max}, exact for the truncated field.
  ComplexVector cubic(std::span<const Complex> c) const;

  /// Samples at `times` (non-decreasing, ≥ f0.t). The linear part is removed
  /// with the integrating factor c_n = e^{−iω_n t} u_n; the adaptive
  /// integrator only sees the g-sized remainder.
  std::vector<FieldState> evolve(const FieldState& f0, double g, std::span<const double> times,
                                 double tol, OdeStats* stats = nullptr) const;

  /// B = ∫ (x|Ψ|² − Ψ̄ ∂ₓΨ) dx by quadrature on the standard grid.
  Complex breathing_position(const FieldState& f) const;

 private:
  int n_max_;
  HermiteGrid dealiased_;
  HermiteGrid standard_;
};

/// `samples` + 1 equally spaced times from f0.t to t_end.
std::vector<FieldState> nls_evolve(const FieldState& f0, double g, double t_end, double tol,
                                   int samples = 100);

/// Closed bilinear form B = √2 Σ √(n+1) c̄_{n+1} c_n. With the textbook sign
/// convention B(t) = e^{+it} B(0) for every solution.
Complex measure_breathing(const FieldState& f);

struct BreathingPhaseReport {
  double max_modulus_drift = 0.0;  // max ||B(t)| − |B(0)|| / |B(0)|
  double phase_slope = 0.0;        // least-squares slope of unwrapped arg B(t)
};

/// Throws kZeroBreathing if |B(0)| < 1e-12.
BreathingPhaseReport breathing_phase_test(const std::vector<FieldState>& traj);

/// Field coefficients → resonant amplitudes: a_n = conj(e^{iω_n t} c_n). The
/// conjugation maps the textbook e^{−iω t} convention onto a_n ∝ e^{+iω_n t}.
ComplexVector to_resonant_frame(const FieldState& f);

struct ResonantComparison {
  /// sup over modes and samples of ||a_n^full| − |a_n^res||.
  double metric = 0.0;
  /// Drifts of N and E along the stripped full trajectory.
  double n_drift = 0.0;
  double e_drift = 0.0;
  int samples = 0;
};

struct CompareOptions {
  double tol = 1e-11;
  int samples = 50;
};

/// Full equation to t = horizon/g against the resonant system with the 1D
/// trap couplings to τ = horizon, compared on mode moduli. For g = 0 the full
/// equation runs to t = horizon and is compared with its initial moduli.
ResonantComparison compare_resonant(const FieldState& f0, double g, double horizon,
                                    const CompareOptions& options = {});

}  // namespace resonant
