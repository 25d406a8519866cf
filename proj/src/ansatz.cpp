#include "resonant/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "resonant/errors.hpp"

namespace resonant {

namespace {

std::vector<double> prefactors(double lambda, int n_max) {
  std::vector<double> f(static_cast<std::size_t>(n_max) + 1);
  f[0] = 1.0;
  for (int n = 1; n <= n_max; ++n) f[n] = f[n - 1] * std::sqrt((1.0 + (n - 1) * lambda) / n);
  return f;
}

// Model and its holomorphic Jacobian columns ∂/∂b, ∂/∂a, ∂/∂p.
struct Model {
  Eigen::VectorXcd value;
  Eigen::MatrixXcd jacobian;
};

Model evaluate_model(const Eigen::Vector3cd& th, const std::vector<double>& f) {
  const int w = static_cast<int>(f.size());
  Model m{Eigen::VectorXcd(w), Eigen::MatrixXcd(w, 3)};
  const Complex b = th[0], a = th[1], p = th[2];
  Complex pn = 1.0, pn1 = 0.0;  // pⁿ and n pⁿ⁻¹
  for (int n = 0; n < w; ++n) {
    const Complex lin = b + a * static_cast<double>(n);
    m.value[n] = f[n] * lin * pn;
    m.jacobian(n, 0) = f[n] * pn;
    m.jacobian(n, 1) = f[n] * static_cast<double>(n) * pn;
    m.jacobian(n, 2) = f[n] * lin * pn1;
    pn1 = pn * static_cast<double>(n + 1);
    pn *= p;
  }
  return m;
}

struct LmResult {
  Eigen::Vector3cd theta;
  double cost;
  int iterations;
  bool converged;
};

LmResult levenberg_marquardt(const Eigen::VectorXcd& s, Eigen::Vector3cd theta,
                             const std::vector<double>& f, int max_iterations) {
  Model m = evaluate_model(theta, f);
  Eigen::VectorXcd r = s - m.value;
  double cost = r.squaredNorm();
  if (!std::isfinite(cost)) return {theta, std::numeric_limits<double>::infinity(), 0, false};
  double mu = 1e-3;
  const double floor = 1e-30 * s.squaredNorm();
  for (int it = 1; it <= max_iterations; ++it) {
    if (cost <= floor) return {theta, cost, it - 1, true};
    const Eigen::Matrix3cd jtj = m.jacobian.adjoint() * m.jacobian;
    const Eigen::Vector3cd g = m.jacobian.adjoint() * r;
    bool accepted = false;
    while (mu < 1e20) {
      Eigen::Matrix3cd a = jtj;
      for (int i = 0; i < 3; ++i) a(i, i) += mu * std::max(jtj(i, i).real(), 1e-30);
      const Eigen::Vector3cd delta = a.ldlt().solve(g);
      const Eigen::Vector3cd trial = theta + delta;
      Model mt = evaluate_model(trial, f);
      const Eigen::VectorXcd rt = s - mt.value;
      const double ct = rt.squaredNorm();
      if (std::isfinite(ct) && ct < cost) {
        const bool tiny = delta.norm() <= 1e-14 * (theta.norm() + 1e-14);
        const bool flat = cost - ct <= 1e-24 * cost;
        theta = trial;
        m = std::move(mt);
        r = rt;
        cost = ct;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        if (tiny || flat) return {theta, cost, it, true};
        break;
      }
      mu *= 4.0;
    }
    if (!accepted) {
      // No descent at any damping: θ is a stationary point of the cost.
      const double gn = (m.jacobian.adjoint() * r).norm();
      const bool stationary = gn <= 1e-8 * (m.jacobian.norm() * std::sqrt(cost) + 1e-300);
      return {theta, cost, it, stationary};
    }
  }
  return {theta, cost, max_iterations, false};
}

}  // namespace

ModeState ansatz_state(const AnsatzParams& params, int n_max) {
  if (n_max < 0) throw Error(ErrorCode::kInvalidArgument, "n_max must be non-negative");
  if (!(params.lambda >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  if (std::abs(params.p) > 1.0 - kPNormMargin) {
    throw Error(ErrorCode::kPNormViolation, "|p| = " + std::to_string(std::abs(params.p)) +
                                                " exceeds 1 - " + std::to_string(kPNormMargin));
  }
  const auto f = prefactors(params.lambda, n_max);
  const auto m = evaluate_model({params.b, params.a, params.p}, f);
  ModeState s{ComplexVector(f.size()), 0.0};
  for (std::size_t n = 0; n < f.size(); ++n) s.amps[n] = m.value[static_cast<Eigen::Index>(n)];
  return s;
}

double ansatz_tail_fraction(const AnsatzParams& params, int n_max) {
  if (std::abs(params.p) > 1.0 - kPNormMargin) {
    throw Error(ErrorCode::kPNormViolation, "|p| too close to 1");
  }
  // Work with log|a_n|² to survive p close to 1 and large n.
  const double lp = std::log(std::abs(params.p));
  double log_f2 = 0.0;
  double head = 0.0, tail = 0.0;
  for (int n = 0;; ++n) {
    if (n > 0) log_f2 += std::log1p((n - 1) * params.lambda) - std::log(static_cast<double>(n));
    const double lin = std::norm(params.b + params.a * static_cast<double>(n));
    const double term = params.p == 0.0 ? (n == 0 ? lin : 0.0)
                                        : lin * std::exp(log_f2 + 2.0 * n * lp);
    (n <= n_max ? head : tail) += term;
    if (n > n_max + 8 && term <= 1e-30 * (head + tail)) break;
    if (n > n_max + 1'000'000) break;
  }
  return head + tail > 0.0 ? tail / (head + tail) : 0.0;
}

AnsatzFit fit_ansatz(const ModeState& s, double lambda, const FitOptions& options) {
  const int w = static_cast<int>(s.amps.size());
  if (w < 3) throw Error(ErrorCode::kInvalidArgument, "fit needs at least three modes");
  Eigen::VectorXcd target(w);
  for (int n = 0; n < w; ++n) target[n] = s.amps[n];
  const double norm = target.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::kInvalidArgument, "cannot fit the zero state");
  const auto f = prefactors(lambda, w - 1);

  // b p² − 2u p + w = 0 from a₀ = b, a₁ = f₁(b+a)p, a₂ = f₂(b+2a)p².
  const Complex b = s.amps[0], u = s.amps[1] / f[1], v = s.amps[2] / f[2];
  std::vector<Complex> ps;
  if (std::abs(b) > 1e-12 * norm) {
    const Complex disc = std::sqrt(u * u - b * v);
    ps = {(u + disc) / b, (u - disc) / b};
  } else if (std::abs(u) > 1e-12 * norm) {
    ps = {v / (2.0 * u)};
  } else {
    ps = {0.0};
  }
  ps.push_back(0.5);

  LmResult best{{}, std::numeric_limits<double>::infinity(), 0, false};
  for (const Complex p0 : ps) {
    Complex a0 = 0.0;
    if (std::abs(p0) > 1e-12) a0 = u / p0 - b;
    const LmResult r = levenberg_marquardt(target, {b, a0, p0}, f, options.max_iterations);
    if (r.cost < best.cost) best = r;
  }

  AnsatzFit fit;
  fit.params = {best.theta[0], best.theta[1], best.theta[2], lambda};
  fit.residual = std::sqrt(best.cost) / norm;
  fit.iterations = best.iterations;
  fit.converged = best.converged && std::isfinite(fit.residual);
  if (!fit.converged && options.throw_on_divergence) {
    throw Error(ErrorCode::kFitDiverged,
                "best residual " + std::to_string(fit.residual) + " after " +
                    std::to_string(fit.iterations) + " iterations");
  }
  return fit;
}

namespace {

double max_dist(const std::vector<double>& x, const std::vector<double>& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

double sq_dist(const std::vector<double>& x, const std::vector<double>& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d += (x[i] - y[i]) * (x[i] - y[i]);
  return d;
}

// Degree-5 Lagrange interpolation through the six samples around tau.
std::vector<double> interpolate(std::span<const double> tau, const std::vector<std::vector<double>>& x,
                                double t) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(tau.size());
  std::ptrdiff_t i = std::upper_bound(tau.begin(), tau.end(), t) - tau.begin();
  const std::ptrdiff_t lo = std::clamp<std::ptrdiff_t>(i - 3, 0, std::max<std::ptrdiff_t>(n - 6, 0));
  const std::ptrdiff_t hi = std::min(lo + 6, n);
  std::vector<double> out(x.front().size(), 0.0);
  for (std::ptrdiff_t j = lo; j < hi; ++j) {
    double l = 1.0;
    for (std::ptrdiff_t k = lo; k < hi; ++k) {
      if (k != j) l *= (t - tau[k]) / (tau[j] - tau[k]);
    }
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += l * x[j][c];
  }
  return out;
}

}  // namespace

PeriodResult detect_period(std::span<const double> tau, const std::vector<std::vector<double>>& series,
                           const PeriodOptions& options) {
  if (tau.size() != series.size()) throw Error(ErrorCode::kInvalidArgument, "tau/series size mismatch");
  if (tau.size() < 200) throw Error(ErrorCode::kInvalidArgument, "need at least 200 samples");
  const auto& x0 = series.front();
  std::vector<double> d(series.size());
  double variation = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    d[i] = max_dist(series[i], x0);
    variation = std::max(variation, d[i]);
  }
  if (variation < 1e-12) throw Error(ErrorCode::kConstantObservable, "observable does not vary");
  const double threshold = options.threshold > 0.0 ? options.threshold : 0.1 * variation;

  std::size_t i = 1;
  while (i < d.size() && d[i] <= threshold) ++i;  // leave the neighbourhood of τ₀
  std::size_t hit = 0;
  for (; i + 1 < d.size(); ++i) {
    if (d[i] < threshold && d[i] <= d[i - 1] && d[i] <= d[i + 1]) {
      hit = i;
      break;
    }
  }
  if (hit == 0) throw Error(ErrorCode::kNoReturnFound, "no return below threshold within the horizon");

  auto sample = [&](double t) {
    return options.evaluate ? options.evaluate(t) : interpolate(tau, series, t);
  };
  // Golden-section search on the smooth squared distance.
  double a = tau[hit - 1], b = tau[hit + 1];
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double t1 = b - r * (b - a), t2 = a + r * (b - a);
  double f1 = sq_dist(sample(t1), x0), f2 = sq_dist(sample(t2), x0);
  for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = t2;
      t2 = t1;
      f2 = f1;
      t1 = b - r * (b - a);
      f1 = sq_dist(sample(t1), x0);
    } else {
      a = t1;
      t1 = t2;
      f1 = f2;
      t2 = a + r * (b - a);
      f2 = sq_dist(sample(t2), x0);
    }
  }
  const double t_star = 0.5 * (a + b);
  return {t_star - tau.front(), max_dist(sample(t_star), x0)};
}

}  // namespace resonant
