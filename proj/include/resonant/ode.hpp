#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "resonant/state.hpp"

namespace resonant {

/// dy/dt = f(t, y); `dydt` is pre-sized to y.size().
using OdeSystem = std::function<void(double t, const ComplexVector& y, ComplexVector& dydt)>;

struct OdeOptions {
  /// Local error per step, measured in the max norm against tol·(1 + |y_i|).
  double tol = 1e-10;
  double h_max = std::numeric_limits<double>::infinity();
  long max_steps = 50'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

/// Dormand–Prince 5(4) with FSAL and the standard fourth-order dense output.
/// Returns y at each entry of `times`, which must be non-decreasing and ≥ t0.
/// Throws kStepSizeUnderflow (with the time reached) if the step collapses.
std::vector<ComplexVector> dopri5(const OdeSystem& f, const ComplexVector& y0, double t0,
                                  std::span<const double> times, const OdeOptions& options = {},
                                  OdeStats* stats = nullptr);

}  // namespace resonant
