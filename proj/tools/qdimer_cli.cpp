// Command-line front end: spectra, gamma sweeps, gap analysis and checks.
#include "qdimer/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>

namespace {

using qdimer::GridScale;

struct Common {
  std::string model = "dnls";
  int two_j = 2;
  double gamma = 0.0;
  double epsilon = 1.0;
  double tol = 1e-12;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_model, bool with_gamma) {
  if (with_model) {
    cmd->add_option("--model", c.model, "dnls or al")->check(CLI::IsMember({"dnls", "al"}));
  }
  cmd->add_option("--two-j", c.two_j, "twice the spin (number of quanta)");
  if (with_gamma) cmd->add_option("--gamma", c.gamma, "nonlinearity");
  cmd->add_option("--epsilon", c.epsilon, "hopping strength (dnls only)");
  cmd->add_option("--out", c.out, "output file (default stdout)");
  cmd->add_option("--tol", c.tol, "bisection tolerance");
}

void add_grid(CLI::App* cmd, qdimer::GammaGrid& g, std::string& scale) {
  cmd->add_option("--gamma-min", g.gamma_min, "first grid point");
  cmd->add_option("--gamma-max", g.gamma_max, "last grid point");
  cmd->add_option("--steps", g.steps, "number of grid points");
  cmd->add_option("--scale", scale, "linear or log")->check(CLI::IsMember({"linear", "log"}));
}

GridScale parse_scale(const std::string& s) { return s == "log" ? GridScale::kLog : GridScale::kLinear; }

// Writes to --out when given, stdout otherwise.
int emit(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(std::cout);
    std::cout.flush();
    return 0;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open " << path << " for writing\n";
    return 2;
  }
  body(file);
  return file.good() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact spectra of quantum DNLS and Ablowitz-Ladik dimers"};
  app.set_version_flag("--version", std::string(qdimer::kVersion));
  app.require_subcommand(1);

  Common spec_c;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and normalization constants");
  add_common(spectrum, spec_c, true, true);

  Common sweep_c;
  sweep_c.two_j = 6;
  qdimer::GammaGrid sweep_grid;
  std::string sweep_scale = "linear";
  unsigned sweep_threads = 0;
  auto* sweep = app.add_subcommand("sweep", "spectrum over a gamma grid");
  add_common(sweep, sweep_c, true, false);
  add_grid(sweep, sweep_grid, sweep_scale);
  sweep->add_option("--threads", sweep_threads, "worker threads (0 = all cores)");

  Common gaps_c;
  gaps_c.two_j = 6;
  qdimer::GapParams gap_p;
  std::string gaps_scale = "log";
  auto* gaps = app.add_subcommand("gaps", "lowest-pair gaps of the dnls chain energies");
  add_common(gaps, gaps_c, false, false);
  gaps->add_option("--pairs", gap_p.pairs, "number of lowest pairs");
  add_grid(gaps, gap_p.grid, gaps_scale);
  gaps->add_option("--threads", gap_p.threads, "worker threads (0 = all cores)");

  Common scan_c;
  scan_c.gamma = 2.0;
  qdimer::QuantaScanParams scan_p;
  auto* scan = app.add_subcommand("quanta-scan", "lowest al energies against the number of quanta");
  scan->add_option("--gamma", scan_c.gamma, "nonlinearity");
  scan->add_option("--two-j-max", scan_p.two_j_max, "largest number of quanta");
  scan->add_option("--levels", scan_p.levels, "lowest levels per sector");
  scan->add_option("--out", scan_c.out, "output file (default stdout)");
  scan->add_option("--tol", scan_c.tol, "bisection tolerance");

  qdimer::VerifyParams verify_p;
  auto* verify = app.add_subcommand("verify", "run invariant checks");
  verify->add_option("--suite", verify_p.suite, "which checks to run")->check(CLI::IsMember({"algebra", "spectral", "conservation", "all"}));
  verify->add_option("--two-j-max", verify_p.two_j_max, "largest dimer for the spectral checks");
  verify->add_option("--m-max", verify_p.m_max, "largest sector for the algebra checks");
  verify->add_flag("--inject-failure", verify_p.inject_failure)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*spectrum) {
      qdimer::SpectrumParams p{qdimer::parse_model(spec_c.model), spec_c.two_j, spec_c.gamma, spec_c.epsilon,
                               spec_c.tol};
      return emit(spec_c.out, [&](std::ostream& os) { qdimer::cmd_spectrum(p, os); });
    }
    if (*sweep) {
      sweep_grid.scale = parse_scale(sweep_scale);
      qdimer::SweepParams p{qdimer::parse_model(sweep_c.model), sweep_c.two_j, sweep_grid, sweep_c.epsilon,
                            sweep_c.tol, sweep_threads};
      qdimer::expand_grid(p.grid);
      return emit(sweep_c.out, [&](std::ostream& os) { qdimer::cmd_sweep(p, os); });
    }
    if (*gaps) {
      gap_p.grid.scale = parse_scale(gaps_scale);
      gap_p.two_j = gaps_c.two_j;
      gap_p.epsilon = gaps_c.epsilon;
      gap_p.tol = gaps_c.tol;
      qdimer::expand_grid(gap_p.grid);
      return emit(gaps_c.out, [&](std::ostream& os) { qdimer::cmd_gaps(gap_p, os); });
    }
    if (*scan) {
      scan_p.gamma = scan_c.gamma;
      scan_p.tol = scan_c.tol;
      return emit(scan_c.out, [&](std::ostream& os) { qdimer::cmd_quanta_scan(scan_p, os); });
    }
    if (*verify) {
      return qdimer::cmd_verify(verify_p, std::cout) ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
