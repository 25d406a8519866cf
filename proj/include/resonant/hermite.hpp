#pragma once

#include <span>
#include <vector>

#include "resonant/state.hpp"

namespace resonant {

/// Orthonormal Hermite functions h_0(x)..h_{n_max}(x) by the stable three-term
/// recurrence.
std::vector<double> hermite_functions(double x, int n_max);

struct GaussHermiteRule {
  std::vector<double> nodes;
  /// Weights with the e^{−y²} factor folded back in:
  /// ∫ f(y) dy = Σ_j weights[j] f(y_j) exactly for f = e^{−y²}·(polynomial of degree ≤ 2Q−1).
  std::vector<double> weights;
};

/// Q-point Gauss–Hermite rule (Golub–Welsch, then Newton polishing).
GaussHermiteRule gauss_hermite(int q);

/// Collocation grid for Hermite-function expansions on modes 0..n_max.
///
/// kStandard integrates h_n·h_m products exactly; kDealiased puts the nodes at
/// y_j/√2 so that products of four Hermite functions, and hence the cubic
/// nonlinearity projected back onto the basis, are integrated exactly.
class HermiteGrid {
 public:
  enum class Kind { kStandard, kDealiased };

  /// Throws kGridMismatch if nodes < 2·n_max + 1.
  HermiteGrid(int n_max, int nodes, Kind kind = Kind::kStandard);

  int n_max() const { return n_max_; }
  int nodes() const { return static_cast<int>(x_.size()); }
  Kind kind() const { return kind_; }
  std::span<const double> x() const { return x_; }
  std::span<const double> weights() const { return w_; }
  double basis(int n, int j) const { return by_node_[static_cast<std::size_t>(j) * (n_max_ + 1) + n]; }

  /// Coefficients → point samples Ψ(x_j). Throws kGridMismatch on a size mismatch.
  ComplexVector to_grid(std::span<const Complex> coeffs) const;
  /// Point samples → coefficients c_n = Σ_j w_j h_n(x_j) f_j.
  ComplexVector to_coeffs(std::span<const Complex> samples) const;

 private:
  int n_max_;
  Kind kind_;
  std::vector<double> x_;
  std::vector<double> w_;
  std::vector<double> by_node_;      // [j][n] = h_n(x_j)
  std::vector<double> weighted_;     // [n][j] = w_j h_n(x_j)
};

}  // namespace resonant
