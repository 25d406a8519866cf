#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "resonant/polyspace.hpp"

namespace resonant {

struct Quartet {
  int n = 0, m = 0, k = 0, l = 0;
  auto operator<=>(const Quartet&) const = default;
};

/// Representative of (n,m,k,l) under n↔m, k↔l and (n,m)↔(k,l): n≤m, k≤l,
/// (n,m) ≤ (k,l). Throws kNotResonant unless n+m = k+l.
Quartet canonical_quartet(int n, int m, int k, int l);

/// Number of ordered quartets in the symmetry orbit of q.
int orbit_size(const Quartet& q);

/// Real coupling tensor C_{nmkl} on resonant quartets n+m = k+l.
///
/// Normalization: the resonant Hamiltonian is
///   H_res = ½ Σ_{ordered n+m=k+l} C_{nmkl} ā_n ā_m a_k a_l,
/// so that the flow i ∂H_res/∂ā_n reads
///   da_n/dτ = i Σ_m Σ_k C_{n,m,k,n+m−k} ā_m a_k a_{n+m−k}.
/// Only canonical quartets are stored; lookups accept any index order.
class CouplingTensor {
 public:
  explicit CouplingTensor(int n_max);

  int n_max() const { return n_max_; }
  std::size_t size() const { return entries_.size(); }

  /// Stores v for the whole orbit of (n,m,k,l). Throws kNotResonant.
  void set(int n, int m, int k, int l, double v);
  /// Zero when out of range or not resonant.
  double operator()(int n, int m, int k, int l) const;

  const std::map<Quartet, double>& entries() const { return entries_; }
  double max_abs() const;

  /// Dense [n][m][k] array of C_{n,m,k,n+m−k}, zero where l is out of range.
  std::span<const double> slab() const { return slab_; }

  /// H_res written out as a polynomial with the normalization above.
  PhasePoly to_poly() const;

 private:
  std::size_t slab_index(int n, int m, int k) const {
    const std::size_t w = static_cast<std::size_t>(n_max_) + 1;
    return (static_cast<std::size_t>(n) * w + static_cast<std::size_t>(m)) * w +
           static_cast<std::size_t>(k);
  }

  int n_max_;
  std::map<Quartet, double> entries_;
  std::vector<double> slab_;
};

/// β_n = √((1+n)(1+nλ)), λ = 1/G, with λ = 0 standing for G = ∞.
class BreathingVector {
 public:
  static BreathingVector from_lambda(double lambda, int n_max);
  /// Arbitrary β, for degenerate or perturbed inputs.
  static BreathingVector from_values(std::vector<double> beta, double lambda = 0.0);

  double lambda() const { return lambda_; }
  /// Zero outside [0, size).
  double beta(int n) const {
    return n < 0 || n >= static_cast<int>(beta_.size()) ? 0.0 : beta_[static_cast<std::size_t>(n)];
  }
  std::span<const double> values() const { return beta_; }

 private:
  double lambda_ = 0.0;
  std::vector<double> beta_;
};

struct ResonantSplit {
  CouplingTensor c;
  std::vector<Monomial> s_terms;
};

/// Splits an averaged quartic polynomial into C-channel couplings and S-channel
/// terms. Throws kMalformedChannel for terms that are neither and for
/// non-real couplings.
ResonantSplit from_resonant_poly(const PhasePoly& p);

/// max |β_n C_{n+1,m,k,l} + β_m C_{n,m+1,k,l} − β_{k−1} C_{n,m,k−1,l} − β_{l−1} C_{n,m,k,l−1}|
/// over n+m+1 = k+l with every referenced index ≤ n_max. Negative indices
/// contribute zero.
double check_C_identity(const CouplingTensor& c, const BreathingVector& bv);

struct ForcingStep {
  Quartet entry;   // (n, m, k, l) of S_{nmkl} with m ≤ k ≤ l
  int beta_index;  // β used to solve for the entry
  int order;       // m + k + l
};

struct SVanishingTrace {
  bool empty_support = false;
  int offset = 0;  // n − (m+k+l) on the support
  std::vector<ForcingStep> steps;
};

/// Enumerates the S-channel support of the ladder and certifies that the
/// β-recursion forces every entry up to n_max to zero, lowest m+k+l first.
/// Throws kNonForcing if a required β vanishes.
SVanishingTrace assert_S_vanishes(const BreathingVector& bv, const Rational& omega0, int n_max);

struct GFit {
  double lambda = 0.0;
  double residual = 0.0;
  double G() const;
};

struct GSearchOptions {
  double lambda_max = 100.0;
  int grid_points = 10000;
  /// Acceptance threshold relative to max|C|.
  double relative_threshold = 1e-6;
};

/// λ ∈ [0, λ_max] minimizing check_C_identity. Throws kNoConsistentG when
/// the best residual exceeds the threshold.
GFit find_G(const CouplingTensor& c, const GSearchOptions& options = {});

/// Same search without the threshold check.
GFit scan_G(const CouplingTensor& c, const GSearchOptions& options = {});

inline constexpr int kMaxGeneratedModes = 64;

/// Contact-interaction 1D trap: C_{nmkl} = ∫ h_n h_m h_k h_l dx on resonant quartets.
CouplingTensor gen_nls1d(int n_max);

/// Full quartic interaction ½ Σ W_{nmkl} ā_n ā_m a_k a_l of the 1D trap, every quartet.
PhasePoly nls_quartic_hamiltonian(int n_max);

/// V_{nmkl} = ∫₀^π e_n e_m e_k e_l / sin²x dx, e_n = √(2/π) sin((n+1)x).
double conformal_overlap(int n, int m, int k, int l, int nodes);

/// (1/4) Σ V_{nmkl} q_n q_m q_k q_l with q_n = (a_n + ā_n)/√(2ω_n), ω_n = n+1.
PhasePoly conformal_quartic_hamiltonian(int n_max);

/// Averages the conformal quartic Hamiltonian on the ω₀ = 1 ladder and reads off C.
CouplingTensor gen_conformal(int n_max);

void save_couplings(std::ostream& out, const CouplingTensor& c);
void save_couplings(const std::filesystem::path& path, const CouplingTensor& c);
CouplingTensor load_couplings(std::istream& in);
CouplingTensor load_couplings(const std::filesystem::path& path);

}  // namespace resonant
