#include "resonant/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "resonant/errors.hpp"

namespace resonant {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

double scaled_max(const ComplexVector& v, const ComplexVector& y, double tol) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]) / (tol * (1.0 + std::abs(y[i]))));
  return m;
}

[[noreturn]] void underflow(double t, const char* why) {
  std::ostringstream os;
  os.precision(17);
  os << why << " at t=" << t;
  throw Error(ErrorCode::kStepSizeUnderflow, os.str());
}

}  // namespace

std::vector<ComplexVector> dopri5(const OdeSystem& f, const ComplexVector& y0, double t0,
                                  std::span<const double> times, const OdeOptions& options,
                                  OdeStats* stats) {
  if (!(options.tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t0 || (i > 0 && times[i] < times[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "sample times must be non-decreasing and >= t0");
    }
  }
  std::vector<ComplexVector> out;
  out.reserve(times.size());
  OdeStats local;
  OdeStats& st = stats ? *stats : local;

  const std::size_t n = y0.size();
  const double tol = options.tol;
  ComplexVector y = y0, y1(n), tmp(n), err(n);
  ComplexVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  ComplexVector r1(n), r2(n), r3(n), r4(n), r5(n);
  auto eval = [&](double t, const ComplexVector& x, ComplexVector& dx) {
    f(t, x, dx);
    ++st.evaluations;
  };

  std::size_t next = 0;
  while (next < times.size() && times[next] == t0) out.push_back(y0), ++next;
  if (next == times.size()) return out;
  const double t_end = times.back();

  double t = t0;
  eval(t, y, k1);

  // Initial step (Hairer, Nørsett & Wanner, II.4).
  double h;
  {
    const double d0 = scaled_max(y, y, tol), dd1 = scaled_max(k1, y, tol);
    double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
    h0 = std::min({h0, t_end - t, options.h_max});
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h0 * k1[i];
    eval(t + h0, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) err[i] = (k2[i] - k1[i]) / h0;
    const double dd2 = scaled_max(err, y, tol);
    const double m = std::max(dd1, dd2);
    const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
    h = std::min({100 * h0, h1, options.h_max});
  }

  bool last_rejected = false;
  while (next < times.size()) {
    if (st.accepted + st.rejected >= options.max_steps) underflow(t, "step budget exhausted");
    h = std::min({h, t_end - t, options.h_max});
    if (h <= 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      underflow(t, "step size underflow");
    }
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    eval(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    }
    eval(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i) {
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    const double t_new = (h == t_end - t) ? t_end : t + h;
    eval(t_new, tmp, k6);
    for (std::size_t i = 0; i < n; ++i) {
      y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    eval(t_new, y1, k7);

    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex d = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = tol * (1.0 + std::max(std::abs(y[i]), std::abs(y1[i])));
      e = std::max(e, std::abs(d) / sc);
    }
    if (!std::isfinite(e)) {
      ++st.rejected;
      h *= 0.2;
      last_rejected = true;
      continue;
    }
    double fac = e == 0.0 ? 10.0 : 0.9 * std::pow(e, -0.2);
    fac = std::clamp(fac, 0.2, 10.0);

    if (e > 1.0) {
      ++st.rejected;
      h *= std::min(fac, 1.0);
      last_rejected = true;
      continue;
    }

    ++st.accepted;
    // Dense output coefficients for this step.
    for (std::size_t i = 0; i < n; ++i) {
      const Complex dy = y1[i] - y[i];
      const Complex bspl = h * k1[i] - dy;
      r1[i] = y[i];
      r2[i] = dy;
      r3[i] = bspl;
      r4[i] = dy - h * k7[i] - bspl;
      r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    while (next < times.size() && times[next] <= t_new) {
      if (times[next] == t_new) {
        out.push_back(y1);
      } else {
        const double th = (times[next] - t) / h, th1 = 1.0 - th;
        ComplexVector v(n);
        for (std::size_t i = 0; i < n; ++i) {
          v[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
        }
        out.push_back(std::move(v));
      }
      ++next;
    }
    t = t_new;
    std::swap(y, y1);
    std::swap(k1, k7);  // FSAL
    if (last_rejected) fac = std::min(fac, 1.0);
    last_rejected = false;
    h *= fac;
  }
  return out;
}

}  // namespace resonant
