#include "resonant/hermite.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "resonant/errors.hpp"
#include "resonant/kernels.hpp"

namespace resonant {

std::vector<double> hermite_functions(double x, int n_max) {
  std::vector<double> h(static_cast<std::size_t>(n_max) + 1);
  h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (n_max >= 1) h[1] = std::numbers::sqrt2 * x * h[0];
  for (int n = 1; n < n_max; ++n) {
    h[n + 1] = std::sqrt(2.0 / (n + 1)) * x * h[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * h[n - 1];
  }
  return h;
}

GaussHermiteRule gauss_hermite(int q) {
  if (q < 1) throw Error(ErrorCode::kInvalidArgument, "Gauss-Hermite rule needs q >= 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(q);
  Eigen::VectorXd sub(q > 1 ? q - 1 : 0);
  for (int k = 1; k < q; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

  GaussHermiteRule rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  for (int j = 0; j < q; ++j) {
    double x = solver.eigenvalues()[j];
    // Newton on h_q, whose roots are those of the degree-q Hermite polynomial.
    for (int it = 0; it < 3; ++it) {
      const auto h = hermite_functions(x, q);
      const double dh = std::sqrt(2.0 * q) * h[q - 1] - x * h[q];
      if (dh == 0.0) break;
      x -= h[q] / dh;
    }
    const auto h = hermite_functions(x, q - 1);
    double s = 0.0;
    for (double v : h) s += v * v;
    rule.nodes[j] = x;
    rule.weights[j] = 1.0 / s;
  }
  return rule;
}

HermiteGrid::HermiteGrid(int n_max, int nodes, Kind kind) : n_max_(n_max), kind_(kind) {
  if (n_max < 0) throw Error(ErrorCode::kInvalidArgument, "n_max must be non-negative");
  if (nodes < 2 * n_max + 1) {
    throw Error(ErrorCode::kGridMismatch, "grid needs at least 2*n_max+1 nodes, got " +
                                              std::to_string(nodes));
  }
  const auto rule = gauss_hermite(nodes);
  const double scale = kind == Kind::kDealiased ? 1.0 / std::numbers::sqrt2 : 1.0;
  const std::size_t w = static_cast<std::size_t>(n_max) + 1;
  x_.resize(nodes);
  w_.resize(nodes);
  by_node_.resize(w * nodes);
  weighted_.resize(w * nodes);
  for (int j = 0; j < nodes; ++j) {
    x_[j] = rule.nodes[j] * scale;
    w_[j] = rule.weights[j] * scale;
    const auto h = hermite_functions(x_[j], n_max);
    for (int n = 0; n <= n_max; ++n) {
      by_node_[j * w + n] = h[n];
      weighted_[n * static_cast<std::size_t>(nodes) + j] = w_[j] * h[n];
    }
  }
}

ComplexVector HermiteGrid::to_grid(std::span<const Complex> coeffs) const {
  const std::size_t w = static_cast<std::size_t>(n_max_) + 1;
  if (coeffs.size() != w) throw Error(ErrorCode::kGridMismatch, "coefficient count != n_max+1");
  std::vector<double> re(w), im(w);
  for (std::size_t n = 0; n < w; ++n) {
    re[n] = coeffs[n].real();
    im[n] = coeffs[n].imag();
  }
  const auto dot = simd::active().dot_real_complex;
  ComplexVector out(x_.size());
  for (std::size_t j = 0; j < x_.size(); ++j) {
    const auto s = dot(by_node_.data() + j * w, re.data(), im.data(), w);
    out[j] = {s.re, s.im};
  }
  return out;
}

ComplexVector HermiteGrid::to_coeffs(std::span<const Complex> samples) const {
  const std::size_t q = x_.size();
  if (samples.size() != q) throw Error(ErrorCode::kGridMismatch, "sample count != grid nodes");
  std::vector<double> re(q), im(q);
  for (std::size_t j = 0; j < q; ++j) {
    re[j] = samples[j].real();
    im[j] = samples[j].imag();
  }
  const auto dot = simd::active().dot_real_complex;
  ComplexVector out(static_cast<std::size_t>(n_max_) + 1);
  for (std::size_t n = 0; n < out.size(); ++n) {
    const auto s = dot(weighted_.data() + n * q, re.data(), im.data(), q);
    out[n] = {s.re, s.im};
  }
  return out;
}

}  // namespace resonant
