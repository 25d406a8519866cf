#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "resonant/state.hpp"

namespace resonant {

using Rational = boost::rational<std::int64_t>;

/// Monomial identity: sorted conjugate indices, then sorted plain indices.
/// A repeated index encodes a higher degree, so ā₀ā₀a₁ is {abar = {0, 0}, a = {1}}.
/// The defaulted ordering (lexicographic over abar, then a) is the canonical
/// term order used for iteration and summation.
struct MonomialKey {
  std::vector<int> abar;
  std::vector<int> a;

  MonomialKey() = default;
  MonomialKey(std::vector<int> abar_indices, std::vector<int> a_indices);

  auto operator<=>(const MonomialKey&) const = default;
  bool operator==(const MonomialKey&) const = default;

  int degree() const { return static_cast<int>(abar.size() + a.size()); }
  int abar_degree(int mode) const;
  int a_degree(int mode) const;
  /// -1 for the constant monomial.
  int max_index() const;
  /// deg_a - deg_ā; the phase charge of the term.
  int imbalance() const { return static_cast<int>(a.size()) - static_cast<int>(abar.size()); }
  MonomialKey conjugate() const { return MonomialKey(a, abar); }
};

struct Monomial {
  MonomialKey key;
  Complex coeff;
};

class PhasePoly;

/// Mutable accumulator used to assemble a PhasePoly term by term.
class PolyAccumulator {
 public:
  explicit PolyAccumulator(int max_mode) : max_mode_(max_mode) {}

  /// Merges a term; terms with an index above max_mode are counted and dropped.
  void add(const MonomialKey& key, Complex coeff);
  void add(MonomialKey&& key, Complex coeff);

  PhasePoly build() &&;

 private:
  int max_mode_;
  std::size_t truncated_ = 0;
  std::map<MonomialKey, Complex> terms_;
};

/// Sparse polynomial in the mode amplitudes a_n and their conjugates ā_n with
/// complex double coefficients. Values are immutable once built.
class PhasePoly {
 public:
  using TermMap = std::map<MonomialKey, Complex>;

  PhasePoly() = default;
  explicit PhasePoly(int max_mode) : max_mode_(max_mode) {}
  /// Drops exact zeros; throws kInvalidArgument if an index is negative or
  /// exceeds max_mode.
  PhasePoly(TermMap terms, int max_mode, std::size_t truncated = 0);

  static PhasePoly constant(Complex value, int max_mode = 0);
  static PhasePoly term(Complex coeff, std::vector<int> abar, std::vector<int> a,
                        int max_mode = -1);

  int max_mode() const { return max_mode_; }
  /// Number of terms discarded by truncation when this value was produced.
  std::size_t truncated() const { return truncated_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  Complex coeff(const MonomialKey& key) const;
  double max_abs_coeff() const;
  bool is_homogeneous(int degree) const;

 private:
  friend class PolyAccumulator;
  TermMap terms_;
  int max_mode_ = 0;
  std::size_t truncated_ = 0;
};

PhasePoly poly_add(const PhasePoly& p, const PhasePoly& q);
PhasePoly poly_mul(const PhasePoly& p, const PhasePoly& q);
PhasePoly scale(const PhasePoly& p, Complex factor);

inline PhasePoly operator+(const PhasePoly& p, const PhasePoly& q) { return poly_add(p, q); }
inline PhasePoly operator-(const PhasePoly& p) { return scale(p, -1.0); }
inline PhasePoly operator-(const PhasePoly& p, const PhasePoly& q) { return poly_add(p, -q); }
inline PhasePoly operator*(const PhasePoly& p, const PhasePoly& q) { return poly_mul(p, q); }
inline PhasePoly operator*(Complex c, const PhasePoly& p) { return scale(p, c); }

/// Poisson bracket in amplitude variables,
///   {F, G} = i Σ_k (∂F/∂ā_k ∂G/∂a_k − ∂F/∂a_k ∂G/∂ā_k),
/// the convention under which a free mode evolves as a_n(t) = e^{iω_n t} a_n(0).
PhasePoly poisson_bracket(const PhasePoly& f, const PhasePoly& g);

PhasePoly derivative_a(const PhasePoly& p, int mode);
PhasePoly derivative_abar(const PhasePoly& p, int mode);

/// Swaps a ↔ ā in every term and conjugates the coefficients.
PhasePoly conjugate(const PhasePoly& p);

/// Keeps only the terms whose indices are all ≤ max_index.
PhasePoly restrict_modes(const PhasePoly& p, int max_index);

/// Drops terms with |coeff| ≤ tol.
PhasePoly prune(const PhasePoly& p, double tol);

/// Sums in canonical key order, so the result is reproducible bit for bit.
Complex evaluate(const PhasePoly& p, std::span<const Complex> amps);
inline Complex evaluate(const PhasePoly& p, const ModeState& s) { return evaluate(p, s.amps); }

/// Linear spectrum ω_n = ω₀ + n on modes 0..n_max, ω₀ an exact positive rational.
class FrequencyLadder {
 public:
  FrequencyLadder(Rational omega0, int n_max);

  const Rational& omega0() const { return omega0_; }
  int n_max() const { return n_max_; }
  Rational omega(int n) const { return omega0_ + Rational(n); }
  double omega_real(int n) const { return boost::rational_cast<double>(omega(n)); }

 private:
  Rational omega0_;
  int n_max_;
};

/// Recovers an exact ω₀ from a floating-point value; throws kIrrationalLadder
/// unless x is within 1e-12 of p/q with q ≤ max_denominator.
Rational rational_from_real(double x, std::int64_t max_denominator = 1000);

/// Parses "p/q" or "p"; throws kInvalidArgument for anything else (decimals included).
Rational parse_rational(const std::string& text);

PhasePoly ladder_hamiltonian(const FrequencyLadder& ladder);
/// N = Σ ā_n a_n over modes 0..n_max.
PhasePoly number_poly(int n_max);
/// E = Σ n ā_n a_n over modes 0..n_max.
PhasePoly energy_poly(int n_max);
/// B₀ = Σ_{n<size} β_n ā_n a_{n+1}; the polynomial lives on modes 0..beta.size().
PhasePoly breathing_poly(std::span<const double> beta);

/// One term per line, `re im | abar: n1 n2 ... | a: m1 m2 ...`, then a blank line.
void write_poly(std::ostream& out, const PhasePoly& p);
/// Reads until a blank line or end of input. max_mode < 0 infers it from the
/// largest index present. Throws kFormatError with the offending line number.
PhasePoly read_poly(std::istream& in, int max_mode = -1);

}  // namespace resonant
