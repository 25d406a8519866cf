#pragma once

#include <functional>
#include <span>
#include <vector>

#include "resonant/state.hpp"

namespace resonant {

/// a_n = f_n (b + a·n) pⁿ with f_n = √(∏_{j<n} (1 + jλ) / n!), λ = 1/G.
struct AnsatzParams {
  Complex b;
  Complex a;
  Complex p;
  double lambda = 0.0;
};

inline constexpr double kPNormMargin = 1e-3;

/// Throws kPNormViolation if |p| > 1 − kPNormMargin.
ModeState ansatz_state(const AnsatzParams& params, int n_max);

/// Σ_{n > n_max} |a_n|² / Σ_n |a_n|² for the family member, from the analytic
/// profile; used to size the truncation window.
double ansatz_tail_fraction(const AnsatzParams& params, int n_max);

struct FitOptions {
  int max_iterations = 200;
  bool throw_on_divergence = false;
};

struct AnsatzFit {
  AnsatzParams params;
  /// ‖s − ansatz_state(params)‖ / ‖s‖.
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Levenberg–Marquardt over (b, a, p) at fixed λ, started from the roots
/// implied by a₀, a₁, a₂. A non-converged fit is returned with
/// converged = false, or thrown as kFitDiverged when requested.
AnsatzFit fit_ansatz(const ModeState& s, double lambda, const FitOptions& options = {});

struct PeriodOptions {
  /// Return threshold in the max norm; ≤ 0 means 0.1 × the largest excursion.
  double threshold = 0.0;
  /// Optional exact evaluation of the observable at an arbitrary τ. Without
  /// it the series is interpolated between samples.
  std::function<std::vector<double>(double tau)> evaluate;
};

struct PeriodResult {
  double period = 0.0;
  /// ‖x(τ*) − x(τ₀)‖∞.
  double return_residual = 0.0;
};

/// First τ* > τ₀ at which the sampled observable comes back to its initial
/// value: after leaving the threshold neighbourhood of x(τ₀), the first local
/// minimum of ‖x(τ) − x(τ₀)‖ that lies below the threshold, refined between
/// its neighbouring samples. Needs ≥ 200 samples.
/// Throws kConstantObservable or kNoReturnFound.
PeriodResult detect_period(std::span<const double> tau, const std::vector<std::vector<double>>& series,
                           const PeriodOptions& options = {});

}  // namespace resonant
