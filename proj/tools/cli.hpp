#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resonant/polyspace.hpp"
#include "resonant/state.hpp"

namespace resonant::cli {

enum class Command { kGenCouplings, kAudit, kReduce, kBracket, kEvolve, kAnsatzRun, kPdeValidate };

/// Parsed, validated command line. Fields not used by `command` keep their defaults.
struct RunConfig {
  Command command = Command::kAudit;
  int threads = 0;
  std::optional<std::string> kernel;

  // gen-couplings
  std::string system;
  int n_max = -1;

  // shared paths
  std::string couplings;
  std::string out;

  // audit
  std::optional<double> lambda;
  double threshold = 1e-6;

  // reduce
  std::string poly;
  Rational omega0{1};
  std::string census;

  // bracket
  std::string left;
  std::string right;

  // evolve / ansatz-run
  std::string init;
  double tau_end = 0.0;
  double tol = 1e-10;
  int samples = 100;
  std::string report;
  Complex b{1.0, 0.0};
  Complex a{0.0, 0.0};
  Complex p{0.0, 0.0};

  // pde-validate
  double g = 0.0;
  double horizon = 1.0;
  std::string init_spec;
};

/// Thrown for every command-line problem; maps to exit status 2. `help` is set
/// when the user asked for --help and `message` holds the help text.
struct UsageError {
  std::string message;
  bool help = false;
};

/// Parses argv (program name first). Keys from `--config FILE` fill options
/// not given on the command line; unknown keys are rejected.
RunConfig parse_config(const std::vector<std::string>& args);

/// Runs the command. Returns 0 on success; domain errors propagate as
/// resonant::Error.
int dispatch(const RunConfig& config);

/// parse_config + dispatch with the 0/1/2 exit-code contract.
int run(const std::vector<std::string>& args);

/// "re,im", "Xi", or a plain real.
Complex parse_complex(const std::string& text);

}  // namespace resonant::cli
