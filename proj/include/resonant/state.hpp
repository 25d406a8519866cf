#pragma once

#include <complex>
#include <vector>

namespace resonant {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Mode amplitudes a_0..a_{n_max} of the resonant system at slow time tau.
struct ModeState {
  ComplexVector amps;
  double tau = 0.0;

  int n_max() const { return static_cast<int>(amps.size()) - 1; }
};

}  // namespace resonant
