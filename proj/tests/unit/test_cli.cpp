#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "doctest.h"
#include "resonant/couplings.hpp"

using namespace resonant;
using namespace resonant::cli;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Captured {
  int code;
  std::string out;
};

Captured run_captured(std::vector<std::string> args) {
  args.insert(args.begin(), "resonant");
  std::ostringstream out, err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  const int code = run(args);
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return {code, out.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("resonant-cli-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("help text matches the golden files") {
  const fs::path dir = RESONANT_GOLDEN_DIR;
  CHECK(run_captured({"--help"}).out == slurp(dir / "help.txt"));
  for (const std::string sub :
       {"gen-couplings", "audit", "reduce", "bracket", "evolve", "ansatz-run", "pde-validate"}) {
    const auto r = run_captured({sub, "--help"});
    CHECK(r.code == 0);
    CHECK_MESSAGE(r.out == slurp(dir / ("help_" + sub + ".txt")), sub);
  }
}

TEST_CASE("parse_config defaults and rationals") {
  TempDir tmp;
  write_file(tmp / "c.tsv", "");
  write_file(tmp / "init.txt", "1 0\n");
  write_file(tmp / "h.poly", "");
  const auto ev = parse_config({"resonant", "evolve", "--couplings", tmp / "c.tsv", "--init", tmp / "init.txt",
                                "--tau-end", "10", "--out", tmp / "t.csv"});
  CHECK(ev.command == Command::kEvolve);
  CHECK(ev.tol == 1e-10);
  CHECK(ev.tau_end == 10.0);
  CHECK(ev.samples == 100);

  const auto rd = parse_config({"resonant", "reduce", "--poly", tmp / "h.poly", "--omega0", "1/2", "--n-max", "4",
                                "--out", tmp / "r.poly"});
  CHECK(rd.omega0 == Rational(1, 2));

  CHECK_THROWS_AS(parse_config({"resonant", "reduce", "--poly", tmp / "h.poly", "--omega0", "0.333",
                                "--n-max", "4", "--out", tmp / "r.poly"}),
                  UsageError);
  CHECK(run_captured({"reduce", "--poly", tmp / "h.poly", "--omega0", "0.333", "--n-max", "4", "--out",
                      tmp / "r.poly"})
            .code == 2);
  CHECK(run_captured({"evolve", "--couplings", tmp / "missing.tsv"}).code == 2);
  CHECK(run_captured({"frobnicate"}).code == 2);
  CHECK(run_captured({}).code == 2);
}

TEST_CASE("config files") {
  TempDir tmp;
  write_file(tmp / "c.tsv", "");
  write_file(tmp / "init.txt", "1 0\n");
  write_file(tmp / "run.cfg", "# evolve settings\ncouplings = " + tmp / "c.tsv" + "\ninit = " + tmp / "init.txt" +
                                  "\ntau_end = 4\ntol = 1e-9\nout = " + tmp / "t.csv" + "\n");
  const auto cfg = parse_config({"resonant", "--config", tmp / "run.cfg", "evolve", "--tol", "1e-12"});
  CHECK(cfg.tau_end == 4.0);
  CHECK(cfg.tol == 1e-12);

  write_file(tmp / "bad.cfg", "tau_end = 4\nwobble = 3\n");
  try {
    parse_config({"resonant", "--config", tmp / "bad.cfg", "evolve"});
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    CHECK(e.message.find("wobble") != std::string::npos);
  }
}

TEST_CASE("complex literals") {
  CHECK(parse_complex("0.5") == Complex(0.5, 0));
  CHECK(parse_complex("0.4i") == Complex(0, 0.4));
  CHECK(parse_complex("-1,2.5") == Complex(-1, 2.5));
  CHECK_THROWS(parse_complex("x"));
}

TEST_CASE("audit exit codes") {
  TempDir tmp;
  REQUIRE(run_captured({"gen-couplings", "--system", "nls1d", "--n-max", "12", "--out", tmp / "nls.tsv"}).code == 0);
  const auto nls = run_captured({"audit", "--couplings", tmp / "nls.tsv", "--lambda", "0"});
  CHECK(nls.code == 0);
  const auto j = json::parse(nls.out);
  CHECK(j["residual"].get<double>() < 1e-10);
  CHECK(j["G"].is_null());
  CHECK(j["consistent"].get<bool>());

  REQUIRE(run_captured({"gen-couplings", "--system", "conformal", "--n-max", "8", "--out", tmp / "conf.tsv"}).code == 0);
  const auto conf = run_captured({"audit", "--couplings", tmp / "conf.tsv"});
  CHECK(conf.code == 0);
  CHECK(json::parse(conf.out)["G"].get<double>() == doctest::Approx(2.0).epsilon(1e-5));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  CouplingTensor c(5);
  for (int n = 0; n <= 5; ++n)
    for (int m = n; m <= 5; ++m)
      for (int k = n; k <= 5; ++k) {
        const int l = n + m - k;
        if (l >= 0 && l <= 5) c.set(n, m, k, l, u(rng));
      }
  save_couplings(tmp / "random.tsv", c);
  const auto bad = run_captured({"audit", "--couplings", tmp / "random.tsv"});
  CHECK(bad.code == 1);
  CHECK_FALSE(json::parse(bad.out)["consistent"].get<bool>());
}

TEST_CASE("reduce writes the averaged polynomial and census") {
  TempDir tmp;
  {
    std::ofstream out(tmp / "h.poly");
    write_poly(out, PhasePoly::term(1.0, {1}, {0, 0, 0}) + PhasePoly::term(1.0, {0, 0}, {0, 0}));
  }
  for (const auto& [omega0, kept] : {std::pair<std::string, int>{"1", 1}, {"1/2", 2}}) {
    const auto r = run_captured({"reduce", "--poly", tmp / "h.poly", "--omega0", omega0, "--n-max", "1", "--out",
                                 tmp / "avg.poly", "--census", "-"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["dropped"].get<int>() == 2 - kept);
    std::ifstream in(tmp / "avg.poly");
    CHECK(static_cast<int>(read_poly(in).size()) == kept);
  }
}

TEST_CASE("evolve output and determinism") {
  TempDir tmp;
  REQUIRE(run_captured({"gen-couplings", "--system", "conformal", "--n-max", "6", "--out", tmp / "c.tsv"}).code == 0);
  write_file(tmp / "init.txt", "0.8 0\n0 0.5\n0.3 0\n0 0\n0 0\n0 0\n0 0\n");
  auto go = [&](const std::string& out) {
    return run_captured({"evolve", "--couplings", tmp / "c.tsv", "--init", tmp / "init.txt", "--tau-end", "2",
                         "--samples", "4", "--out", tmp / out})
        .code;
  };
  REQUIRE(go("a.csv") == 0);
  REQUIRE(go("b.csv") == 0);
  const std::string csv = slurp(tmp / "a.csv");
  CHECK(csv == slurp(tmp / "b.csv"));
  CHECK(csv.rfind("tau,re_a0,im_a0,re_a1,im_a1,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  const auto report = json::parse(slurp(tmp / "a.csv.json"));
  CHECK(report["n_drift"].get<double>() < 1e-8);
  CHECK(report["e_drift"].get<double>() < 1e-8);

  write_file(tmp / "short.txt", "1 0\n");
  CHECK(run_captured({"evolve", "--couplings", tmp / "c.tsv", "--init", tmp / "short.txt", "--tau-end", "1",
                      "--out", tmp / "x.csv"})
            .code == 1);
}

TEST_CASE("ansatz-run and pde-validate summaries") {
  TempDir tmp;
  REQUIRE(run_captured({"gen-couplings", "--system", "conformal", "--n-max", "16", "--out", tmp / "c.tsv"}).code == 0);
  REQUIRE(run_captured({"ansatz-run", "--couplings", tmp / "c.tsv", "--b", "1", "--a", "0.4i", "--p", "0.2",
                        "--tau-end", "2", "--samples", "20", "--out", tmp / "a.csv"})
              .code == 0);
  const auto summary = json::parse(slurp(tmp / "a.csv.json"));
  CHECK(summary["max_fit_residual"].get<double>() < 1e-6);
  CHECK(summary["lambda"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(slurp(tmp / "a.csv").rfind("tau,fit_residual,abs_p,", 0) == 0);

  const auto pde = run_captured({"pde-validate", "--g", "0.02", "--horizon", "0.2", "--n-max", "8", "--init",
                                 "shifted-gaussian:d=0.5", "--samples", "10", "--out", "-"});
  REQUIRE(pde.code == 0);
  const auto j = json::parse(pde.out);
  CHECK(j["metric"].get<double>() < 1e-2);
  CHECK(std::abs(j["breathing"]["phase_slope"].get<double>() - 1.0) < 1e-6);

  CHECK(run_captured({"pde-validate", "--g", "0.02", "--init", "sideways:d=1"}).code == 2);
}

TEST_CASE("installed binary exit status") {
  const std::string bin = RESONANT_BINARY;
  CHECK(std::system((bin + " --help > /dev/null").c_str()) == 0);
  CHECK(WEXITSTATUS(std::system((bin + " reduce --omega0 0.333 2> /dev/null").c_str())) == 2);
}
