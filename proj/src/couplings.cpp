#include "resonant/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <limits>
#include <numbers>
#include <utility>

#include "resonant/errors.hpp"
#include "resonant/hermite.hpp"
#include "resonant/reduction.hpp"

namespace resonant {

namespace {

int pair_multiplicity(int x, int y) { return x == y ? 1 : 2; }

void check_budget(int n_max) {
  if (n_max < 0) throw Error(ErrorCode::kInvalidArgument, "n_max must be non-negative");
  if (n_max > kMaxGeneratedModes) {
    throw Error(ErrorCode::kQuadratureBudgetExceeded,
                "n_max=" + std::to_string(n_max) + " exceeds " + std::to_string(kMaxGeneratedModes));
  }
}

}  // namespace

Quartet canonical_quartet(int n, int m, int k, int l) {
  if (std::min({n, m, k, l}) < 0) throw Error(ErrorCode::kInvalidArgument, "negative mode index");
  if (n + m != k + l) {
    throw Error(ErrorCode::kNotResonant, "(" + std::to_string(n) + "," + std::to_string(m) + "," +
                                             std::to_string(k) + "," + std::to_string(l) +
                                             ") has n+m != k+l");
  }
  std::pair<int, int> left = std::minmax(n, m);
  std::pair<int, int> right = std::minmax(k, l);
  if (right < left) std::swap(left, right);
  return {left.first, left.second, right.first, right.second};
}

int orbit_size(const Quartet& q) {
  const int swap = (q.n == q.k && q.m == q.l) ? 1 : 2;
  return pair_multiplicity(q.n, q.m) * pair_multiplicity(q.k, q.l) * swap;
}

CouplingTensor::CouplingTensor(int n_max) : n_max_(n_max) {
  if (n_max < 0) throw Error(ErrorCode::kInvalidArgument, "n_max must be non-negative");
  const std::size_t w = static_cast<std::size_t>(n_max) + 1;
  slab_.assign(w * w * w, 0.0);
}

void CouplingTensor::set(int n, int m, int k, int l, double v) {
  const Quartet q = canonical_quartet(n, m, k, l);
  if (q.l > n_max_ || q.m > n_max_) {
    throw Error(ErrorCode::kInvalidArgument, "quartet index exceeds n_max");
  }
  if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite coupling");
  entries_[q] = v;
  const std::pair<int, int> pairs[2] = {{q.n, q.m}, {q.k, q.l}};
  for (int s = 0; s < 2; ++s) {
    const auto [x, y] = pairs[s];
    const auto [u, w] = pairs[1 - s];
    slab_[slab_index(x, y, u)] = v;
    slab_[slab_index(x, y, w)] = v;
    slab_[slab_index(y, x, u)] = v;
    slab_[slab_index(y, x, w)] = v;
  }
}

double CouplingTensor::operator()(int n, int m, int k, int l) const {
  if (n < 0 || m < 0 || k < 0 || l < 0) return 0.0;
  if (n > n_max_ || m > n_max_ || k > n_max_ || l > n_max_) return 0.0;
  if (n + m != k + l) return 0.0;
  return slab_[slab_index(n, m, k)];
}

double CouplingTensor::max_abs() const {
  double m = 0.0;
  for (const auto& [q, v] : entries_) m = std::max(m, std::abs(v));
  return m;
}

PhasePoly CouplingTensor::to_poly() const {
  PhasePoly::TermMap t;
  for (const auto& [q, v] : entries_) {
    if (v == 0.0) continue;
    const double c = 0.5 * pair_multiplicity(q.n, q.m) * pair_multiplicity(q.k, q.l) * v;
    t[MonomialKey({q.n, q.m}, {q.k, q.l})] += c;
    if (!(q.n == q.k && q.m == q.l)) t[MonomialKey({q.k, q.l}, {q.n, q.m})] += c;
  }
  return PhasePoly(std::move(t), n_max_);
}

BreathingVector BreathingVector::from_lambda(double lambda, int n_max) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  BreathingVector bv;
  bv.lambda_ = lambda;
  bv.beta_.resize(static_cast<std::size_t>(std::max(n_max, 0)) + 1);
  for (std::size_t n = 0; n < bv.beta_.size(); ++n) {
    const double x = static_cast<double>(n);
    bv.beta_[n] = std::sqrt((1.0 + x) * (1.0 + x * lambda));
  }
  return bv;
}

BreathingVector BreathingVector::from_values(std::vector<double> beta, double lambda) {
  BreathingVector bv;
  bv.lambda_ = lambda;
  bv.beta_ = std::move(beta);
  return bv;
}

ResonantSplit from_resonant_poly(const PhasePoly& p) {
  ResonantSplit out{CouplingTensor(std::max(p.max_mode(), 0)), {}};
  const double scale = std::max(1.0, p.max_abs_coeff());
  const double tol = 1e-12 * scale;

  std::map<Quartet, std::pair<Complex, int>> implied;  // sum of implied values, contributions
  for (const auto& [key, c] : p.terms()) {
    if (key.degree() != 4) {
      throw Error(ErrorCode::kMalformedChannel, "non-quartic term in resonant polynomial");
    }
    const std::size_t nbar = key.abar.size();
    if (nbar == 1 || nbar == 3) {
      out.s_terms.push_back({key, c});
      continue;
    }
    if (nbar != 2) {
      throw Error(ErrorCode::kMalformedChannel, "term with four a or four abar cannot be resonant");
    }
    const int n = key.abar[0], m = key.abar[1], k = key.a[0], l = key.a[1];
    if (n + m != k + l) {
      throw Error(ErrorCode::kMalformedChannel, "two-two term off the resonant surface n+m=k+l");
    }
    // Real symmetric C forces every two-two coefficient to be real.
    if (std::abs(c.imag()) > tol) {
      throw Error(ErrorCode::kMalformedChannel, "coupling has a non-zero imaginary part");
    }
    const Quartet q = canonical_quartet(n, m, k, l);
    auto& slot = implied[q];
    slot.first += 2.0 * c / static_cast<double>(pair_multiplicity(n, m) * pair_multiplicity(k, l));
    slot.second += 1;
  }

  for (const auto& [q, acc] : implied) {
    const bool self_conjugate = (q.n == q.k && q.m == q.l);
    const int slots = self_conjugate ? 1 : 2;
    if (acc.second != slots) {
      throw Error(ErrorCode::kMalformedChannel, "resonant polynomial is not hermitian");
    }
    const Complex v = acc.first / static_cast<double>(slots);
    if (std::abs(v.imag()) > tol) {
      throw Error(ErrorCode::kMalformedChannel, "coupling has a non-zero imaginary part");
    }
    out.c.set(q.n, q.m, q.k, q.l, v.real());
  }
  // Hermiticity: each pair of conjugate monomials must carry conjugate coefficients.
  for (const auto& [key, c] : p.terms()) {
    if (key.abar.size() != 2) continue;
    const Complex partner = p.coeff(key.conjugate());
    if (std::abs(partner - std::conj(c)) > tol) {
      throw Error(ErrorCode::kMalformedChannel, "resonant polynomial is not hermitian");
    }
  }
  return out;
}

double check_C_identity(const CouplingTensor& c, const BreathingVector& bv) {
  const int nm = c.n_max();
  double worst = 0.0;
  for (int n = 0; n + 1 <= nm; ++n) {
    for (int m = 0; m + 1 <= nm; ++m) {
      const int s = n + m + 1;
      for (int k = std::max(0, s - nm); k <= std::min(s, nm); ++k) {
        const int l = s - k;
        const double r = bv.beta(n) * c(n + 1, m, k, l) + bv.beta(m) * c(n, m + 1, k, l) -
                         bv.beta(k - 1) * c(n, m, k - 1, l) - bv.beta(l - 1) * c(n, m, k, l - 1);
        worst = std::max(worst, std::abs(r));
      }
    }
  }
  return worst;
}

SVanishingTrace assert_S_vanishes(const BreathingVector& bv, const Rational& omega0, int n_max) {
  SVanishingTrace trace;
  const Rational offset = Rational(2) * omega0;
  if (offset.denominator() != 1) {
    trace.empty_support = true;
    return trace;
  }
  trace.offset = static_cast<int>(offset.numerator());
  const int d = trace.offset;
  for (int order = 0; order + d <= n_max; ++order) {
    for (int m = 0; 3 * m <= order; ++m) {
      for (int k = m; m + 2 * k <= order; ++k) {
        const int l = order - m - k;
        const int n = order + d;
        const int beta_index = n - 1;
        if (bv.beta(beta_index) == 0.0) {
          throw Error(ErrorCode::kNonForcing,
                      "beta_" + std::to_string(beta_index) + " = 0 leaves S_{" + std::to_string(n) +
                          "," + std::to_string(m) + "," + std::to_string(k) + "," +
                          std::to_string(l) + "} unconstrained");
        }
        trace.steps.push_back({{n, m, k, l}, beta_index, order});
      }
    }
  }
  trace.empty_support = trace.steps.empty();
  return trace;
}

double GFit::G() const {
  return lambda == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / lambda;
}

GFit scan_G(const CouplingTensor& c, const GSearchOptions& options) {
  auto residual = [&](double lambda) {
    return check_C_identity(c, BreathingVector::from_lambda(lambda, c.n_max()));
  };
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(options.grid_points) + 1);
  grid.push_back(0.0);
  const double lo = std::log(1e-6 * options.lambda_max);
  const double hi = std::log(options.lambda_max);
  for (int i = 0; i < options.grid_points; ++i) {
    grid.push_back(std::exp(lo + (hi - lo) * i / (options.grid_points - 1)));
  }
  std::size_t best = 0;
  double best_r = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = residual(grid[i]);
    if (r < best_r) {
      best_r = r;
      best = i;
    }
  }
  // Golden-section refinement inside the neighbouring grid cells.
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = residual(x1), f2 = residual(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, b); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = residual(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = residual(x2);
    }
  }
  GFit fit{grid[best], best_r};
  for (double x : {a, b, 0.5 * (a + b)}) {
    const double r = residual(x);
    if (r < fit.residual) fit = {x, r};
  }
  return fit;
}

GFit find_G(const CouplingTensor& c, const GSearchOptions& options) {
  const GFit fit = scan_G(c, options);
  const double threshold = options.relative_threshold * c.max_abs();
  if (!(fit.residual <= threshold)) {
    throw Error(ErrorCode::kNoConsistentG,
                "best residual " + std::to_string(fit.residual) + " at lambda=" +
                    std::to_string(fit.lambda) + " exceeds " + std::to_string(threshold));
  }
  return fit;
}

CouplingTensor gen_nls1d(int n_max) {
  check_budget(n_max);
  const HermiteGrid grid(n_max, 2 * n_max + 16, HermiteGrid::Kind::kDealiased);
  const auto w = grid.weights();
  CouplingTensor c(n_max);
  for (int n = 0; n <= n_max; ++n) {
    for (int m = n; m <= n_max; ++m) {
      for (int k = n; k <= n_max; ++k) {
        const int l = n + m - k;
        if (l < k || l > n_max) continue;
        if (Quartet{n, m, k, l} != canonical_quartet(n, m, k, l)) continue;
        double s = 0.0;
        for (int j = 0; j < grid.nodes(); ++j) {
          s += w[j] * grid.basis(n, j) * grid.basis(m, j) * grid.basis(k, j) * grid.basis(l, j);
        }
        c.set(n, m, k, l, s);
      }
    }
  }
  return c;
}

PhasePoly nls_quartic_hamiltonian(int n_max) {
  check_budget(n_max);
  const HermiteGrid grid(n_max, 2 * n_max + 16, HermiteGrid::Kind::kDealiased);
  const auto w = grid.weights();
  const int q = grid.nodes();
  PolyAccumulator acc(n_max);
  for (int n = 0; n <= n_max; ++n) {
    for (int m = n; m <= n_max; ++m) {
      for (int k = 0; k <= n_max; ++k) {
        for (int l = k; l <= n_max; ++l) {
          if ((n + m + k + l) % 2 != 0) continue;  // odd integrand
          double s = 0.0;
          for (int j = 0; j < q; ++j) {
            s += w[j] * grid.basis(n, j) * grid.basis(m, j) * grid.basis(k, j) * grid.basis(l, j);
          }
          // ½ Σ over ordered quartets; the sorted pairs stand for ν(n,m)ν(k,l) of them.
          acc.add(MonomialKey({n, m}, {k, l}),
                  0.5 * pair_multiplicity(n, m) * pair_multiplicity(k, l) * s);
        }
      }
    }
  }
  return std::move(acc).build();
}

double conformal_overlap(int n, int m, int k, int l, int nodes) {
  // With t = cos x, sin((j+1)x)/sin x = U_j(t), so the integral becomes
  // (4/π²) ∫ U_n U_m U_k U_l √(1−t²) dt, done by Gauss–Chebyshev (second kind).
  const double h = std::numbers::pi / (nodes + 1);
  double s = 0.0;
  for (int j = 1; j <= nodes; ++j) {
    const double th = j * h;
    const double sn = std::sin(th);
    s += std::sin((n + 1) * th) * std::sin((m + 1) * th) * std::sin((k + 1) * th) *
         std::sin((l + 1) * th) / (sn * sn);
  }
  return 4.0 / (std::numbers::pi * (nodes + 1)) * s;
}

PhasePoly conformal_quartic_hamiltonian(int n_max) {
  check_budget(n_max);
  const int nodes = 2 * n_max + 16;
  const int w = n_max + 1;
  const double h = std::numbers::pi / (nodes + 1);
  // u[j][i] = U_i(cos θ_j), weight ρ_j = 4 sin²θ_j / (π (nodes+1)).
  std::vector<double> u(static_cast<std::size_t>(nodes) * w), rho(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double th = (j + 1) * h;
    const double sn = std::sin(th);
    rho[j] = 4.0 * sn * sn / (std::numbers::pi * (nodes + 1));
    for (int i = 0; i < w; ++i) u[j * w + i] = std::sin((i + 1) * th) / sn;
  }
  // Pair products ρ_j U_n U_m and U_k U_l, indexed by the sorted pair.
  auto pair_id = [w](int x, int y) { return x * w + y; };
  std::vector<double> pr(static_cast<std::size_t>(w) * w * nodes), pp(pr.size());
  for (int x = 0; x < w; ++x) {
    for (int y = x; y < w; ++y) {
      for (int j = 0; j < nodes; ++j) {
        const double v = u[j * w + x] * u[j * w + y];
        pp[static_cast<std::size_t>(pair_id(x, y)) * nodes + j] = v;
        pr[static_cast<std::size_t>(pair_id(x, y)) * nodes + j] = rho[j] * v;
      }
    }
  }

  PolyAccumulator acc(n_max);
  std::vector<int> abar, a;
  abar.reserve(4);
  a.reserve(4);
  for (int i0 = 0; i0 < w; ++i0) {
    for (int i1 = i0; i1 < w; ++i1) {
      for (int i2 = i1; i2 < w; ++i2) {
        for (int i3 = i2; i3 < w; ++i3) {
          if ((i0 + i1 + i2 + i3) % 2 != 0) continue;
          const double* x = &pr[static_cast<std::size_t>(pair_id(i0, i1)) * nodes];
          const double* y = &pp[static_cast<std::size_t>(pair_id(i2, i3)) * nodes];
          double v = 0.0;
          for (int j = 0; j < nodes; ++j) v += x[j] * y[j];
          // V is an integer multiple of 2/π; anything this small is rounding.
          if (std::abs(v) < 1e-9) continue;
          const int idx[4] = {i0, i1, i2, i3};
          int perms = 24;
          for (int s = 0, run = 1; s < 4; ++s) {
            run = (s > 0 && idx[s] == idx[s - 1]) ? run + 1 : 1;
            perms /= run;
          }
          const double omega = static_cast<double>(i0 + 1) * (i1 + 1) * (i2 + 1) * (i3 + 1);
          const double coeff = 0.25 * v * perms / (4.0 * std::sqrt(omega));
          for (int mask = 0; mask < 16; ++mask) {
            abar.clear();
            a.clear();
            for (int b = 0; b < 4; ++b) (mask >> b & 1 ? abar : a).push_back(idx[b]);
            acc.add(MonomialKey(abar, a), coeff);
          }
        }
      }
    }
  }
  return std::move(acc).build();
}

CouplingTensor gen_conformal(int n_max) {
  check_budget(n_max);
  const FrequencyLadder ladder(Rational(1), n_max);
  auto split = from_resonant_poly(time_average(conformal_quartic_hamiltonian(n_max), ladder));
  return std::move(split.c);
}

namespace {

constexpr const char* kMagic = "resonant-coupling v1";
constexpr const char* kSymmetry = "symmetry=nm.kl.swap";

[[noreturn]] void format_error(int line, const std::string& what) {
  throw Error(ErrorCode::kFormatError, "line " + std::to_string(line) + ": " + what);
}

int header_int(const std::string& text, const std::string& key, int line) {
  const std::string prefix = key + "=";
  if (text.rfind(prefix, 0) != 0) format_error(line, "expected '" + prefix + "...'");
  const std::string value = text.substr(prefix.size());
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (value.empty() || *end != '\0' || v < 0) format_error(line, "bad value for " + key);
  return static_cast<int>(v);
}

}  // namespace

void save_couplings(std::ostream& out, const CouplingTensor& c) {
  out << kMagic << '\n'
      << "n_max=" << c.n_max() << '\n'
      << kSymmetry << '\n'
      << "entries=" << c.size() << '\n'
      << "# H_res = 1/2 sum over ordered n+m=k+l of C[n,m,k,l] conj(a_n) conj(a_m) a_k a_l\n";
  char buf[64];
  for (const auto& [q, v] : c.entries()) {
    std::snprintf(buf, sizeof buf, "%a", v);
    out << q.n << ' ' << q.m << ' ' << q.k << ' ' << q.l << ' ' << buf << '\n';
  }
}

void save_couplings(const std::filesystem::path& path, const CouplingTensor& c) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  save_couplings(out, c);
}

CouplingTensor load_couplings(std::istream& in) {
  std::string text;
  int line = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, text)) {
      ++line;
      if (!text.empty() && text.back() == '\r') text.pop_back();
      if (text.empty() || text[0] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next() || text != kMagic) format_error(line, "missing 'resonant-coupling v1' header");
  if (!next()) format_error(line, "truncated header");
  const int n_max = header_int(text, "n_max", line);
  if (!next() || text != kSymmetry) format_error(line, "expected '" + std::string(kSymmetry) + "'");
  if (!next()) format_error(line, "truncated header");
  const int count = header_int(text, "entries", line);

  CouplingTensor c(n_max);
  int read = 0;
  while (next()) {
    std::istringstream row(text);
    int n, m, k, l;
    std::string value;
    std::string extra;
    if (!(row >> n >> m >> k >> l >> value) || (row >> extra)) {
      format_error(line, "expected 'n m k l value'");
    }
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (*end != '\0') format_error(line, "bad value '" + value + "'");
    if (std::max({n, m, k, l}) > n_max || std::min({n, m, k, l}) < 0) {
      format_error(line, "index outside header n_max=" + std::to_string(n_max));
    }
    if (n + m != k + l) format_error(line, "quartet is not resonant");
    if (Quartet{n, m, k, l} != canonical_quartet(n, m, k, l)) {
      format_error(line, "quartet is not in canonical order");
    }
    if (c.entries().count(Quartet{n, m, k, l}) != 0) format_error(line, "duplicate quartet");
    try {
      c.set(n, m, k, l, v);
    } catch (const Error& e) {
      format_error(line, e.what());
    }
    ++read;
  }
  if (read != count) {
    format_error(line, "header declares " + std::to_string(count) + " entries, found " +
                           std::to_string(read));
  }
  return c;
}

CouplingTensor load_couplings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot read " + path.string());
  return load_couplings(in);
}

}  // namespace resonant
