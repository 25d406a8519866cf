#include "resonant/polyspace.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>
#include <utility>

#include "resonant/errors.hpp"

namespace resonant {

namespace {

const Complex kI{0.0, 1.0};

std::vector<int> merge_sorted(const std::vector<int>& x, const std::vector<int>& y) {
  std::vector<int> out;
  out.reserve(x.size() + y.size());
  std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

// Removes one occurrence of `mode`; the caller guarantees it is present.
std::vector<int> remove_one(const std::vector<int>& x, int mode) {
  std::vector<int> out = x;
  out.erase(std::lower_bound(out.begin(), out.end(), mode));
  return out;
}

int count_of(const std::vector<int>& x, int mode) {
  auto [lo, hi] = std::equal_range(x.begin(), x.end(), mode);
  return static_cast<int>(hi - lo);
}

// Distinct modes present in both sorted index lists.
std::vector<int> shared_modes(const std::vector<int>& x, const std::vector<int>& y) {
  std::vector<int> out;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

MonomialKey::MonomialKey(std::vector<int> abar_indices, std::vector<int> a_indices)
    : abar(std::move(abar_indices)), a(std::move(a_indices)) {
  std::sort(abar.begin(), abar.end());
  std::sort(a.begin(), a.end());
}

int MonomialKey::abar_degree(int mode) const { return count_of(abar, mode); }
int MonomialKey::a_degree(int mode) const { return count_of(a, mode); }

int MonomialKey::max_index() const {
  int m = -1;
  if (!abar.empty()) m = std::max(m, abar.back());
  if (!a.empty()) m = std::max(m, a.back());
  return m;
}

void PolyAccumulator::add(const MonomialKey& key, Complex coeff) {
  if (key.max_index() > max_mode_) {
    ++truncated_;
    return;
  }
  terms_[key] += coeff;
}

void PolyAccumulator::add(MonomialKey&& key, Complex coeff) {
  if (key.max_index() > max_mode_) {
    ++truncated_;
    return;
  }
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), coeff);
  } else {
    it->second += coeff;
  }
}

PhasePoly PolyAccumulator::build() && {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == Complex{}; });
  PhasePoly p(max_mode_);
  p.terms_ = std::move(terms_);
  p.truncated_ = truncated_;
  return p;
}

PhasePoly::PhasePoly(TermMap terms, int max_mode, std::size_t truncated)
    : terms_(std::move(terms)), max_mode_(max_mode), truncated_(truncated) {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == Complex{}; });
  for (const auto& [key, c] : terms_) {
    if (key.max_index() > max_mode_) {
      throw Error(ErrorCode::kInvalidArgument, "term index exceeds max_mode");
    }
    if ((!key.abar.empty() && key.abar.front() < 0) || (!key.a.empty() && key.a.front() < 0)) {
      throw Error(ErrorCode::kInvalidArgument, "negative mode index");
    }
  }
}

PhasePoly PhasePoly::constant(Complex value, int max_mode) {
  TermMap t;
  t.emplace(MonomialKey{}, value);
  return PhasePoly(std::move(t), max_mode);
}

PhasePoly PhasePoly::term(Complex coeff, std::vector<int> abar, std::vector<int> a, int max_mode) {
  MonomialKey key(std::move(abar), std::move(a));
  if (max_mode < 0) max_mode = std::max(0, key.max_index());
  TermMap t;
  t.emplace(std::move(key), coeff);
  return PhasePoly(std::move(t), max_mode);
}

Complex PhasePoly::coeff(const MonomialKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Complex{} : it->second;
}

double PhasePoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

bool PhasePoly::is_homogeneous(int degree) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [degree](const auto& kv) { return kv.first.degree() == degree; });
}

PhasePoly poly_add(const PhasePoly& p, const PhasePoly& q) {
  PolyAccumulator acc(std::max(p.max_mode(), q.max_mode()));
  for (const auto& [key, c] : p.terms()) acc.add(key, c);
  for (const auto& [key, c] : q.terms()) acc.add(key, c);
  return std::move(acc).build();
}

PhasePoly poly_mul(const PhasePoly& p, const PhasePoly& q) {
  PolyAccumulator acc(std::max(p.max_mode(), q.max_mode()));
  for (const auto& [kp, cp] : p.terms()) {
    for (const auto& [kq, cq] : q.terms()) {
      acc.add(MonomialKey(merge_sorted(kp.abar, kq.abar), merge_sorted(kp.a, kq.a)), cp * cq);
    }
  }
  return std::move(acc).build();
}

PhasePoly scale(const PhasePoly& p, Complex factor) {
  PhasePoly::TermMap t;
  for (const auto& [key, c] : p.terms()) t.emplace(key, c * factor);
  return PhasePoly(std::move(t), p.max_mode());
}

PhasePoly poisson_bracket(const PhasePoly& f, const PhasePoly& g) {
  PolyAccumulator acc(std::max(f.max_mode(), g.max_mode()));
  for (const auto& [kf, cf] : f.terms()) {
    for (const auto& [kg, cg] : g.terms()) {
      // + i ∂F/∂ā_k ∂G/∂a_k
      for (int k : shared_modes(kf.abar, kg.a)) {
        const double mult = count_of(kf.abar, k) * count_of(kg.a, k);
        acc.add(MonomialKey(merge_sorted(remove_one(kf.abar, k), kg.abar),
                            merge_sorted(kf.a, remove_one(kg.a, k))),
                kI * cf * cg * mult);
      }
      // − i ∂F/∂a_k ∂G/∂ā_k
      for (int k : shared_modes(kf.a, kg.abar)) {
        const double mult = count_of(kf.a, k) * count_of(kg.abar, k);
        acc.add(MonomialKey(merge_sorted(kf.abar, remove_one(kg.abar, k)),
                            merge_sorted(remove_one(kf.a, k), kg.a)),
                -kI * cf * cg * mult);
      }
    }
  }
  return std::move(acc).build();
}

PhasePoly derivative_a(const PhasePoly& p, int mode) {
  PolyAccumulator acc(p.max_mode());
  for (const auto& [key, c] : p.terms()) {
    const int d = key.a_degree(mode);
    if (d == 0) continue;
    acc.add(MonomialKey(key.abar, remove_one(key.a, mode)), c * static_cast<double>(d));
  }
  return std::move(acc).build();
}

PhasePoly derivative_abar(const PhasePoly& p, int mode) {
  PolyAccumulator acc(p.max_mode());
  for (const auto& [key, c] : p.terms()) {
    const int d = key.abar_degree(mode);
    if (d == 0) continue;
    acc.add(MonomialKey(remove_one(key.abar, mode), key.a), c * static_cast<double>(d));
  }
  return std::move(acc).build();
}

PhasePoly conjugate(const PhasePoly& p) {
  PhasePoly::TermMap t;
  for (const auto& [key, c] : p.terms()) t.emplace(key.conjugate(), std::conj(c));
  return PhasePoly(std::move(t), p.max_mode());
}

PhasePoly restrict_modes(const PhasePoly& p, int max_index) {
  PhasePoly::TermMap t;
  for (const auto& [key, c] : p.terms()) {
    if (key.max_index() <= max_index) t.emplace(key, c);
  }
  return PhasePoly(std::move(t), std::min(p.max_mode(), std::max(max_index, 0)));
}

PhasePoly prune(const PhasePoly& p, double tol) {
  PhasePoly::TermMap t;
  for (const auto& [key, c] : p.terms()) {
    if (std::abs(c) > tol) t.emplace(key, c);
  }
  return PhasePoly(std::move(t), p.max_mode());
}

Complex evaluate(const PhasePoly& p, std::span<const Complex> amps) {
  const int n = static_cast<int>(amps.size());
  Complex total{};
  for (const auto& [key, c] : p.terms()) {
    if (key.max_index() >= n) {
      throw Error(ErrorCode::kInvalidArgument, "state has fewer modes than the polynomial uses");
    }
    Complex v = c;
    for (int i : key.abar) v *= std::conj(amps[i]);
    for (int i : key.a) v *= amps[i];
    total += v;
  }
  return total;
}

FrequencyLadder::FrequencyLadder(Rational omega0, int n_max) : omega0_(omega0), n_max_(n_max) {
  if (omega0_ <= Rational(0)) {
    throw Error(ErrorCode::kInvalidArgument, "ladder requires omega0 > 0");
  }
  if (n_max_ < 0) throw Error(ErrorCode::kInvalidArgument, "n_max must be non-negative");
}

Rational rational_from_real(double x, std::int64_t max_denominator) {
  if (!std::isfinite(x)) throw Error(ErrorCode::kIrrationalLadder, "non-finite frequency");
  for (std::int64_t q = 1; q <= max_denominator; ++q) {
    const double p = std::round(x * static_cast<double>(q));
    if (std::abs(x - p / static_cast<double>(q)) < 1e-12) {
      return Rational(static_cast<std::int64_t>(p), q);
    }
  }
  std::ostringstream msg;
  msg << std::setprecision(17) << x << " is not p/q with q <= " << max_denominator;
  throw Error(ErrorCode::kIrrationalLadder, msg.str());
}

Rational parse_rational(const std::string& text) {
  static const std::regex re(R"(^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) {
    throw Error(ErrorCode::kInvalidArgument, "expected a rational p/q, got '" + text + "'");
  }
  const std::int64_t p = std::stoll(m[1].str());
  const std::int64_t q = m[2].matched ? std::stoll(m[2].str()) : 1;
  if (q == 0) throw Error(ErrorCode::kInvalidArgument, "zero denominator in '" + text + "'");
  return Rational(p, q);
}

PhasePoly ladder_hamiltonian(const FrequencyLadder& ladder) {
  PhasePoly::TermMap t;
  for (int n = 0; n <= ladder.n_max(); ++n) t.emplace(MonomialKey({n}, {n}), ladder.omega_real(n));
  return PhasePoly(std::move(t), ladder.n_max());
}

PhasePoly number_poly(int n_max) {
  PhasePoly::TermMap t;
  for (int n = 0; n <= n_max; ++n) t.emplace(MonomialKey({n}, {n}), 1.0);
  return PhasePoly(std::move(t), n_max);
}

PhasePoly energy_poly(int n_max) {
  PhasePoly::TermMap t;
  for (int n = 1; n <= n_max; ++n) t.emplace(MonomialKey({n}, {n}), static_cast<double>(n));
  return PhasePoly(std::move(t), n_max);
}

PhasePoly breathing_poly(std::span<const double> beta) {
  PhasePoly::TermMap t;
  const int len = static_cast<int>(beta.size());
  for (int n = 0; n < len; ++n) t.emplace(MonomialKey({n}, {n + 1}), beta[n]);
  return PhasePoly(std::move(t), len);
}

void write_poly(std::ostream& out, const PhasePoly& p) {
  std::ostringstream line;
  for (const auto& [key, c] : p.terms()) {
    line.str({});
    line << std::setprecision(17) << c.real() << ' ' << c.imag() << " | abar:";
    for (int i : key.abar) line << ' ' << i;
    line << " | a:";
    for (int i : key.a) line << ' ' << i;
    out << line.str() << '\n';
  }
  out << '\n';
}

PhasePoly read_poly(std::istream& in, int max_mode) {
  PhasePoly::TermMap t;
  std::string line;
  int line_no = 0;
  int seen_max = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kFormatError, "line " + std::to_string(line_no) + ": " + why);
  };
  auto parse_indices = [&](const std::string& field, const char* label) {
    std::istringstream fs(field);
    std::string tag;
    if (!(fs >> tag) || tag != label) fail(std::string("expected '") + label + "'");
    std::vector<int> idx;
    std::string tok;
    while (fs >> tok) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        fail("bad index '" + tok + "'");
      }
      if (used != tok.size() || v < 0) fail("bad index '" + tok + "'");
      idx.push_back(v);
    }
    return idx;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) break;
    const auto bar1 = line.find('|');
    const auto bar2 = bar1 == std::string::npos ? bar1 : line.find('|', bar1 + 1);
    if (bar2 == std::string::npos) fail("expected 're im | abar: ... | a: ...'");
    std::istringstream cs(line.substr(0, bar1));
    double re = 0.0, im = 0.0;
    std::string extra;
    if (!(cs >> re >> im) || (cs >> extra)) fail("bad coefficient");
    MonomialKey key(parse_indices(line.substr(bar1 + 1, bar2 - bar1 - 1), "abar:"),
                    parse_indices(line.substr(bar2 + 1), "a:"));
    seen_max = std::max(seen_max, key.max_index());
    if (max_mode >= 0 && key.max_index() > max_mode) {
      fail("index exceeds n_max=" + std::to_string(max_mode));
    }
    t[key] += Complex(re, im);
  }
  return PhasePoly(std::move(t), max_mode >= 0 ? max_mode : seen_max);
}

}  // namespace resonant
