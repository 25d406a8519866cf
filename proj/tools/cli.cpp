#include "cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "resonant/ansatz.hpp"
#include "resonant/couplings.hpp"
#include "resonant/errors.hpp"
#include "resonant/evolution.hpp"
#include "resonant/kernels.hpp"
#include "resonant/nlsbench.hpp"
#include "resonant/reduction.hpp"

namespace resonant::cli {

namespace {

using nlohmann::json;

const std::map<std::string, Command> kCommands = {
    {"gen-couplings", Command::kGenCouplings}, {"audit", Command::kAudit},
    {"reduce", Command::kReduce},              {"bracket", Command::kBracket},
    {"evolve", Command::kEvolve},              {"ansatz-run", Command::kAnsatzRun},
    {"pde-validate", Command::kPdeValidate},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key = value lines; '#' starts a comment line.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError{"cannot read config file '" + path + "'"};
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError{path + ":" + std::to_string(no) + ": expected 'key = value'"};
    }
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    kv.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return kv;
}

bool mentions(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  return out;
}

ModeState read_init(const std::string& path, int n_max) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot read " + path);
  ModeState s;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    double re = 0.0, im = 0.0;
    std::string extra;
    if (!(row >> re >> im) || (row >> extra)) {
      throw Error(ErrorCode::kFormatError, path + ":" + std::to_string(no) + ": expected 're im'");
    }
    s.amps.emplace_back(re, im);
  }
  if (s.n_max() != n_max) {
    throw Error(ErrorCode::kInvalidArgument, "initial state has " + std::to_string(s.amps.size()) +
                                                 " modes, couplings need " + std::to_string(n_max + 1));
  }
  return s;
}

FieldState parse_init_spec(const std::string& spec, int n_max) {
  if (spec.rfind("shifted-gaussian:d=", 0) == 0) {
    char* end = nullptr;
    const std::string v = spec.substr(19);
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0') throw UsageError{"bad shift in '" + spec + "'"};
    return shifted_gaussian(d, n_max);
  }
  if (spec.rfind("modes:", 0) == 0) {
    FieldState f{ComplexVector(static_cast<std::size_t>(n_max) + 1, 0.0), 0.0};
    std::istringstream list(spec.substr(6));
    std::string item;
    std::size_t n = 0;
    while (std::getline(list, item, ';')) {
      if (n > static_cast<std::size_t>(n_max)) throw UsageError{"more modes than n-max + 1"};
      f.coeffs[n++] = parse_complex(trim(item));
    }
    if (n == 0) throw UsageError{"empty mode list"};
    return f;
  }
  throw UsageError{"--init must be 'shifted-gaussian:d=X' or 'modes:c0;c1;...'"};
}

class Parser {
 public:
  Parser() {
    app_.name("resonant");
    app_.description("Breathing modes and resonant systems: algebra, couplings, evolution");
    app_.require_subcommand(1);
    app_.add_option("--threads", cfg_.threads, "Worker threads, 0 = all cores")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app_.add_option("--kernel", kernel_, "Inner-loop kernel override")
        ->check(CLI::IsMember({"scalar", "avx2", "neon"}));
    app_.add_option("--config", config_, "Flat 'key = value' file; command-line flags win");

    auto* gen = sub("gen-couplings", "Generate a resonant coupling tensor");
    gen->add_option("--system", cfg_.system, "Source equation")
        ->required()
        ->check(CLI::IsMember({"nls1d", "conformal"}));
    gen->add_option("--n-max", cfg_.n_max, "Highest mode index")->required()->check(CLI::Range(0, kMaxGeneratedModes));
    gen->add_option("--out", cfg_.out, "Tensor file")->required();

    auto* audit = sub("audit", "Check the coupling identity and recover G");
    audit->add_option("--couplings", cfg_.couplings, "Tensor file")->required()->check(CLI::ExistingFile);
    audit->add_option("--lambda", lambda_, "Check at this lambda = 1/G instead of searching")
        ->check(CLI::NonNegativeNumber);
    audit->add_option("--threshold", cfg_.threshold, "Acceptance threshold relative to max|C|")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* reduce = sub("reduce", "Time-average a polynomial on a frequency ladder");
    reduce->add_option("--poly", cfg_.poly, "Input polynomial file")->required()->check(CLI::ExistingFile);
    reduce->add_option("--omega0", omega0_, "Lowest frequency as p/q")
        ->required()
        ->check(CLI::Validator(
            [](std::string& v) -> std::string {
              try {
                return parse_rational(v) > Rational(0) ? "" : "must be positive";
              } catch (const Error&) {
                return "must be an exact rational p/q or an integer, got '" + v + "'";
              }
            },
            "P/Q"));
    reduce->add_option("--n-max", cfg_.n_max, "Highest mode index")->required()->check(CLI::NonNegativeNumber);
    reduce->add_option("--out", cfg_.out, "Resonant polynomial file")->required();
    reduce->add_option("--census", cfg_.census, "Channel census JSON, '-' for stdout");

    auto* bracket = sub("bracket", "Poisson bracket of two polynomial files");
    bracket->add_option("--left", cfg_.left, "F in {F, G}")->required()->check(CLI::ExistingFile);
    bracket->add_option("--right", cfg_.right, "G in {F, G}")->required()->check(CLI::ExistingFile);
    bracket->add_option("--out", cfg_.out, "Result file, '-' for stdout");

    auto* evolve = sub("evolve", "Integrate the resonant system");
    evolve->add_option("--couplings", cfg_.couplings, "Tensor file")->required()->check(CLI::ExistingFile);
    evolve->add_option("--init", cfg_.init, "Initial amplitudes, 're im' per line")->required()->check(CLI::ExistingFile);
    evolve->add_option("--tau-end", cfg_.tau_end, "Final slow time")->required()->check(CLI::NonNegativeNumber);
    evolve->add_option("--tol", cfg_.tol, "Local error tolerance")->check(CLI::Range(1e-13, 1e-6))
        ->capture_default_str();
    evolve->add_option("--samples", cfg_.samples, "Output intervals")->check(CLI::PositiveNumber)
        ->capture_default_str();
    evolve->add_option("--lambda", lambda_, "lambda = 1/G for B0; default: best fit to the tensor")
        ->check(CLI::NonNegativeNumber);
    evolve->add_option("--out", cfg_.out, "Trajectory CSV")->required();
    evolve->add_option("--report", cfg_.report, "Conserved-quantity JSON; default <out>.json");

    auto* ansatz = sub("ansatz-run", "Evolve a member of the ansatz family and track the fit");
    ansatz->add_option("--couplings", cfg_.couplings, "Tensor file")->required()->check(CLI::ExistingFile);
    ansatz->add_option("--b", b_, "Complex b, as 're,im' or 'Xi'")
        ->capture_default_str();
    ansatz->add_option("--a", a_, "Complex a")
        ->capture_default_str();
    ansatz->add_option("--p", p_, "Complex p, |p| < 1")
        ->capture_default_str();
    ansatz->add_option("--lambda", lambda_, "lambda = 1/G; default: best fit to the tensor")
        ->check(CLI::NonNegativeNumber);
    ansatz->add_option("--tau-end", cfg_.tau_end, "Final slow time")->required()->check(CLI::PositiveNumber);
    ansatz->add_option("--tol", ansatz_tol_, "Local error tolerance")->check(CLI::Range(1e-13, 1e-6))
        ->capture_default_str();
    ansatz->add_option("--samples", ansatz_samples_, "Output intervals")->check(CLI::PositiveNumber)
        ->capture_default_str();
    ansatz->add_option("--out", cfg_.out, "Per-sample CSV")->required();
    ansatz->add_option("--report", cfg_.report, "Summary JSON; default <out>.json");

    auto* pde = sub("pde-validate", "Trapped 1D NLS against its resonant approximation");
    pde->add_option("--g", cfg_.g, "Coupling strength")->required()->check(CLI::NonNegativeNumber);
    pde->add_option("--horizon", cfg_.horizon, "Slow-time horizon")->check(CLI::PositiveNumber)
        ->capture_default_str();
    pde->add_option("--n-max", pde_n_max_, "Highest mode index")->check(CLI::Range(1, kMaxGeneratedModes))
        ->capture_default_str();
    pde->add_option("--init", cfg_.init_spec, "shifted-gaussian:d=X or modes:c0;c1;...")->required();
    pde->add_option("--tol", pde_tol_, "Local error tolerance")->check(CLI::Range(1e-13, 1e-6))
        ->capture_default_str();
    pde->add_option("--samples", pde_samples_, "Output intervals")->check(CLI::PositiveNumber)
        ->capture_default_str();
    pde->add_option("--out", cfg_.out, "Result JSON, '-' for stdout");
  }

  RunConfig parse(std::vector<std::string> args) {
    args = apply_config(std::move(args));
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    try {
      app_.parse(rev);
    } catch (const CLI::CallForHelp&) {
      throw UsageError{help(), true};
    } catch (const CLI::CallForAllHelp&) {
      throw UsageError{app_.help("", CLI::AppFormatMode::All), true};
    } catch (const CLI::ParseError& e) {
      throw UsageError{e.what()};
    }
    for (const auto& [name, cmd] : kCommands) {
      if (app_.got_subcommand(name)) cfg_.command = cmd;
    }
    finish();
    return cfg_;
  }

 private:
  CLI::App* sub(const std::string& name, const std::string& description) {
    auto* s = app_.add_subcommand(name, description);
    subs_[name] = s;
    return s;
  }

  std::string help() const {
    for (const auto& [name, s] : subs_) {
      if (s->parsed()) return s->help();
    }
    return app_.help();
  }

  // Splices config keys in as flags unless the command line already sets them.
  std::vector<std::string> apply_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        break;
      }
      if (args[i].rfind("--config=", 0) == 0) {
        path = args[i].substr(9);
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        break;
      }
    }
    if (path.empty()) return args;
    config_ = path;
    std::size_t at = 0;
    for (std::size_t i = 1; i < args.size(); ++i) {
      if (kCommands.count(args[i])) {
        at = i;
        break;
      }
    }
    if (at == 0) throw UsageError{"--config needs a subcommand on the command line"};
    CLI::App* s = subs_.at(args[at]);
    std::vector<std::string> front, back;
    for (const auto& [key, value] : read_config(path)) {
      const std::string flag = "--" + key;
      const bool local = s->get_option_no_throw(flag) != nullptr;
      const bool global = !local && key != "config" && key != "help" && app_.get_option_no_throw(flag) != nullptr;
      if (!local && !global) throw UsageError{"unknown config key '" + key + "' for " + args[at]};
      if (mentions(args, flag)) continue;
      auto& dst = local ? back : front;
      dst.push_back(flag);
      dst.push_back(value);
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at) + 1, back.begin(), back.end());
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), front.begin(), front.end());
    return args;
  }

  void finish() {
    cfg_.kernel = kernel_.empty() ? std::nullopt : std::optional<std::string>(kernel_);
    if (cfg_.kernel) {
      const simd::Backend want = *cfg_.kernel == "avx2"   ? simd::Backend::kAvx2
                                 : *cfg_.kernel == "neon" ? simd::Backend::kNeon
                                                          : simd::Backend::kScalar;
      if (!simd::available(want)) throw UsageError{"kernel '" + *cfg_.kernel + "' is not available here"};
    }
    if (subs_.at("audit")->parsed() || subs_.at("evolve")->parsed() || subs_.at("ansatz-run")->parsed()) {
      if (auto* o = app_.get_subcommand(subs_parsed())->get_option_no_throw("--lambda"); o && o->count() > 0) {
        cfg_.lambda = lambda_;
      }
    }
    if (cfg_.command == Command::kReduce) {
      try {
        cfg_.omega0 = parse_rational(omega0_);
      } catch (const Error&) {
        throw UsageError{"--omega0 must be an exact rational 'p/q' or integer, got '" + omega0_ + "'"};
      }
      if (cfg_.omega0 <= Rational(0)) throw UsageError{"--omega0 must be positive"};
    }
    if (cfg_.command == Command::kAnsatzRun) {
      try {
        cfg_.b = parse_complex(b_);
        cfg_.a = parse_complex(a_);
        cfg_.p = parse_complex(p_);
      } catch (const std::invalid_argument& e) {
        throw UsageError{e.what()};
      }
      cfg_.tol = ansatz_tol_;
      cfg_.samples = ansatz_samples_;
    }
    if (cfg_.command == Command::kPdeValidate) {
      cfg_.n_max = pde_n_max_;
      cfg_.tol = pde_tol_;
      cfg_.samples = pde_samples_;
      parse_init_spec(cfg_.init_spec, cfg_.n_max);
    }
    if (cfg_.command == Command::kBracket && cfg_.out.empty()) cfg_.out = "-";
    if (cfg_.command == Command::kPdeValidate && cfg_.out.empty()) cfg_.out = "-";
    if ((cfg_.command == Command::kEvolve || cfg_.command == Command::kAnsatzRun) && cfg_.report.empty()) {
      cfg_.report = cfg_.out + ".json";
    }
  }

  std::string subs_parsed() const {
    for (const auto& [name, s] : subs_) {
      if (s->parsed()) return name;
    }
    return "";
  }

  CLI::App app_;
  std::map<std::string, CLI::App*> subs_;
  RunConfig cfg_;
  std::string kernel_;
  std::string config_;
  double lambda_ = 0.0;
  std::string omega0_ = "1";
  std::string b_ = "1";
  std::string a_ = "0";
  std::string p_ = "0";
  double ansatz_tol_ = 1e-11;
  int ansatz_samples_ = 1000;
  int pde_n_max_ = 16;
  double pde_tol_ = 1e-11;
  int pde_samples_ = 50;
};

double resolve_lambda(const RunConfig& cfg, const CouplingTensor& c) {
  return cfg.lambda ? *cfg.lambda : scan_G(c).lambda;
}

void write_json(const std::string& path, const json& j) {
  if (path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

int run_gen(const RunConfig& cfg) {
  const CouplingTensor c = cfg.system == "nls1d" ? gen_nls1d(cfg.n_max) : gen_conformal(cfg.n_max);
  save_couplings(cfg.out, c);
  std::cerr << "gen-couplings: " << c.size() << " quartets, n_max=" << c.n_max() << " -> " << cfg.out << '\n';
  return 0;
}

int run_audit(const RunConfig& cfg) {
  const CouplingTensor c = load_couplings(cfg.couplings);
  const double threshold = cfg.threshold * c.max_abs();
  GFit fit;
  if (cfg.lambda) {
    fit = {*cfg.lambda, check_C_identity(c, BreathingVector::from_lambda(*cfg.lambda, c.n_max()))};
  } else {
    GSearchOptions opt;
    opt.relative_threshold = cfg.threshold;
    fit = scan_G(c, opt);
  }
  const bool ok = fit.residual <= threshold;
  json j = {{"n_max", c.n_max()},        {"entries", c.size()},  {"lambda", fit.lambda},
            {"residual", fit.residual}, {"threshold", threshold}, {"consistent", ok}};
  j["G"] = fit.lambda == 0.0 ? json(nullptr) : json(fit.G());
  std::cout << j.dump(2) << '\n';
  if (!ok) {
    throw Error(ErrorCode::kNoConsistentG, "best residual " + fmt(fit.residual) + " at lambda=" +
                                               fmt(fit.lambda) + " exceeds " + fmt(threshold));
  }
  std::cerr << "audit: lambda=" << fmt(fit.lambda) << " residual=" << fmt(fit.residual) << '\n';
  return 0;
}

int run_reduce(const RunConfig& cfg) {
  std::ifstream in(cfg.poly);
  const PhasePoly h1 = read_poly(in, cfg.n_max);
  const PhasePoly avg = time_average(h1, FrequencyLadder(cfg.omega0, cfg.n_max));
  const ChannelCensus cs = census(avg, h1.size() - avg.size());
  {
    auto out = open_out(cfg.out);
    write_poly(out, avg);
  }
  const json j = {{"c_terms", cs.c_terms}, {"s_terms", cs.s_terms}, {"dropped", cs.dropped},
                  {"other_terms", cs.other_terms}};
  write_json(cfg.census.empty() ? "-" : cfg.census, j);
  std::cerr << "reduce: kept " << avg.size() << " of " << h1.size() << " terms -> " << cfg.out << '\n';
  return 0;
}

int run_bracket(const RunConfig& cfg) {
  std::ifstream lf(cfg.left), rf(cfg.right);
  const PhasePoly f = read_poly(lf);
  const PhasePoly g = read_poly(rf);
  const PhasePoly r = poisson_bracket(f, g);
  if (cfg.out == "-") {
    write_poly(std::cout, r);
  } else {
    auto out = open_out(cfg.out);
    write_poly(out, r);
  }
  std::cerr << "bracket: " << r.size() << " terms, max |coeff| = " << fmt(r.max_abs_coeff()) << '\n';
  return 0;
}

int run_evolve(const RunConfig& cfg) {
  const CouplingTensor c = load_couplings(cfg.couplings);
  const ModeState s0 = read_init(cfg.init, c.n_max());
  const double lambda = resolve_lambda(cfg, c);
  const Trajectory traj = evolve(c, s0, cfg.tau_end, cfg.tol, cfg.samples);
  {
    auto out = open_out(cfg.out);
    out << "tau";
    for (int n = 0; n <= c.n_max(); ++n) out << ",re_a" << n << ",im_a" << n;
    out << '\n';
    for (const auto& s : traj.samples) {
      out << fmt(s.tau);
      for (const auto& v : s.amps) out << ',' << fmt(v.real()) << ',' << fmt(v.imag());
      out << '\n';
    }
  }
  const ConservedReport rep = conserved_report(traj, c, BreathingVector::from_lambda(lambda, c.n_max()));
  json samples = json::array();
  for (const auto& x : rep.samples) {
    samples.push_back({{"tau", x.tau}, {"N", x.n}, {"E", x.e}, {"H", x.h},
                       {"B0", {x.b0.real(), x.b0.imag()}}});
  }
  const json j = {{"lambda", lambda},          {"n_drift", rep.n_drift},   {"e_drift", rep.e_drift},
                  {"h_drift", rep.h_drift},    {"b0_drift", rep.b0_drift}, {"bound_holds", rep.bound_holds},
                  {"steps", traj.stats.accepted}, {"rejected", traj.stats.rejected}, {"samples", samples}};
  write_json(cfg.report, j);
  std::cerr << "evolve: tau=" << fmt(cfg.tau_end) << " N drift " << fmt(rep.n_drift) << ", E drift "
            << fmt(rep.e_drift) << ", B0 drift " << fmt(rep.b0_drift) << '\n';
  return 0;
}

int run_ansatz(const RunConfig& cfg) {
  const CouplingTensor c = load_couplings(cfg.couplings);
  const double lambda = resolve_lambda(cfg, c);
  const AnsatzParams params{cfg.b, cfg.a, cfg.p, lambda};
  const ModeState s0 = ansatz_state(params, c.n_max());
  const double tail = ansatz_tail_fraction(params, c.n_max());
  if (tail > 1e-12) std::cerr << "ansatz-run: warning: truncated tail fraction " << fmt(tail) << '\n';
  const Trajectory traj = evolve(c, s0, cfg.tau_end, cfg.tol, cfg.samples);

  std::vector<double> tau;
  std::vector<std::vector<double>> spectrum;
  double worst = 0.0;
  {
    auto out = open_out(cfg.out);
    out << "tau,fit_residual,abs_p";
    for (int n = 0; n <= c.n_max(); ++n) out << ",spec_" << n;
    out << '\n';
    for (const auto& s : traj.samples) {
      const AnsatzFit fit = fit_ansatz(s, lambda);
      worst = std::max(worst, fit.residual);
      std::vector<double> spec;
      for (const auto& v : s.amps) spec.push_back(std::norm(v));
      out << fmt(s.tau) << ',' << fmt(fit.residual) << ',' << fmt(std::abs(fit.params.p));
      for (double x : spec) out << ',' << fmt(x);
      out << '\n';
      tau.push_back(s.tau);
      spectrum.push_back(std::move(spec));
    }
  }
  json j = {{"lambda", lambda}, {"tail_fraction", tail}, {"max_fit_residual", worst}};
  try {
    const PeriodResult per = detect_period(tau, spectrum);
    j["period"] = per.period;
    j["return_residual"] = per.return_residual;
    j["period_status"] = "found";
  } catch (const Error& e) {
    j["period"] = nullptr;
    j["return_residual"] = nullptr;
    j["period_status"] = std::string(to_string(e.code()));
  } catch (const std::exception& e) {
    j["period"] = nullptr;
    j["return_residual"] = nullptr;
    j["period_status"] = e.what();
  }
  write_json(cfg.report, j);
  std::cerr << "ansatz-run: max fit residual " << fmt(worst) << ", period " << j["period"].dump() << '\n';
  return 0;
}

int run_pde(const RunConfig& cfg) {
  const FieldState f0 = parse_init_spec(cfg.init_spec, cfg.n_max);
  CompareOptions opt;
  opt.tol = cfg.tol;
  opt.samples = cfg.samples;
  const ResonantComparison cmp = compare_resonant(f0, cfg.g, cfg.horizon, opt);
  json j = {{"g", cfg.g},           {"horizon", cfg.horizon},    {"n_max", cfg.n_max},
            {"metric", cmp.metric}, {"n_drift", cmp.n_drift},    {"e_drift", cmp.e_drift}};
  const double span = cfg.g > 0.0 ? cfg.horizon / cfg.g : cfg.horizon;
  try {
    const auto traj = nls_evolve(f0, cfg.g, span, cfg.tol, std::max(cfg.samples, 2));
    const BreathingPhaseReport rep = breathing_phase_test(traj);
    j["breathing"] = {{"modulus_drift", rep.max_modulus_drift}, {"phase_slope", rep.phase_slope}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kZeroBreathing) throw;
    j["breathing"] = nullptr;
    j["breathing_status"] = std::string(to_string(e.code()));
  }
  write_json(cfg.out, j);
  std::cerr << "pde-validate: metric " << fmt(cmp.metric) << '\n';
  return 0;
}

}  // namespace

Complex parse_complex(const std::string& text) {
  const std::string s = trim(text);
  auto number = [&](const std::string& part) {
    char* end = nullptr;
    const double v = std::strtod(part.c_str(), &end);
    if (part.empty() || *end != '\0' || !std::isfinite(v)) {
      throw std::invalid_argument("bad complex number '" + text + "'");
    }
    return v;
  };
  if (const auto comma = s.find(','); comma != std::string::npos) {
    return {number(trim(s.substr(0, comma))), number(trim(s.substr(comma + 1)))};
  }
  if (!s.empty() && s.back() == 'i') {
    const std::string body = s.substr(0, s.size() - 1);
    if (body.empty() || body == "+") return {0.0, 1.0};
    if (body == "-") return {0.0, -1.0};
    return {0.0, number(body)};
  }
  return {number(s), 0.0};
}

RunConfig parse_config(const std::vector<std::string>& args) {
  Parser parser;
  return parser.parse(args);
}

int dispatch(const RunConfig& cfg) {
  omp_set_num_threads(cfg.threads > 0 ? cfg.threads : omp_get_num_procs());
  if (cfg.kernel) {
    simd::select(*cfg.kernel == "avx2"   ? simd::Backend::kAvx2
                 : *cfg.kernel == "neon" ? simd::Backend::kNeon
                                         : simd::Backend::kScalar);
  }
  switch (cfg.command) {
    case Command::kGenCouplings: return run_gen(cfg);
    case Command::kAudit: return run_audit(cfg);
    case Command::kReduce: return run_reduce(cfg);
    case Command::kBracket: return run_bracket(cfg);
    case Command::kEvolve: return run_evolve(cfg);
    case Command::kAnsatzRun: return run_ansatz(cfg);
    case Command::kPdeValidate: return run_pde(cfg);
  }
  return 0;
}

int run(const std::vector<std::string>& args) {
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const UsageError& e) {
    if (e.help) {
      std::cout << e.message;
      return 0;
    }
    std::cerr << "usage error: " << e.message << "\nRun with --help for the list of options.\n";
    return 2;
  }
  try {
    return dispatch(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace resonant::cli
