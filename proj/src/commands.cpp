#include "qdimer/commands.hpp"

#include "qdimer/fock_algebra.hpp"
#include "qdimer/invariants.hpp"
#include "qdimer/qnumbers.hpp"
#include "qdimer/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace qdimer {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs job(i) for i in [0, count) on a small pool. Results are written by
// index, so the output order never depends on scheduling.
template <typename Job>
void parallel_for(std::size_t count, unsigned threads, Job&& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void check_two_j(int two_j) {
  if (two_j < 0) throw UsageError("--two-j must be >= 0");
}

void check_gamma(Model model, double gamma) {
  if (!std::isfinite(gamma)) throw UsageError("--gamma must be finite");
  if (model == Model::kQal && gamma < 0.0) throw UsageError("--gamma must be >= 0 for the al model");
}

void check_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw UsageError("--tol must be positive");
}

std::string echo_line(const std::vector<std::pair<std::string, std::string>>& items) {
  std::string line = "#";
  for (const auto& [key, value] : items) line += " " + key + "=" + value;
  return line + "\n";
}

std::vector<double> chain_energies(const TridiagonalHamiltonian& h, const std::vector<double>& eig) {
  std::vector<double> out(eig);
  for (double& x : out) x = h.dropped.scale * x + h.dropped.shift;
  std::sort(out.begin(), out.end());
  return out;
}

struct CheckLog {
  std::ostream& out;
  bool inject = false;
  int total = 0;
  int failed = 0;

  void record(const std::string& name, double value, double tol) {
    if (inject && total == 0) value = std::isfinite(value) ? value + 1.0 + 10.0 * tol : 1.0;
    const bool pass = value <= tol;
    ++total;
    if (!pass) ++failed;
    out << "check=" << name << " value=" << format_number(value) << " tol=" << format_number(tol)
        << " status=" << (pass ? "PASS" : "FAIL") << "\n";
  }
};

std::string tag(const std::string& base, std::initializer_list<std::pair<const char*, double>> kv) {
  std::string s = base;
  for (const auto& [k, v] : kv) s += std::string(",") + k + "=" + format_number(v);
  return s;
}

void verify_algebra(const VerifyParams& p, CheckLog& log) {
  for (int n = 2; n <= 3; ++n) {
    for (int m = 0; m <= p.m_max; ++m) {
      const BasisPtr basis = build_sector_basis(n, m);
      const double dim = static_cast<double>(basis->dim());
      const ChevalleyGenerators classical = su_n_generators(basis);
      const ResidualReport chev = verify_chevalley(classical);
      log.record(tag("chevalley", {{"n", n}, {"M", m}}), chev.max_residual(), chev.tolerance);
      if (n > 2) {
        log.record(tag("serre", {{"n", n}, {"M", m}}), verify_serre(classical).max_residual(), 1e-12 * dim);
      }
      for (double q : {0.5, 0.8, 1.0}) {
        const ChevalleyGenerators deformed = suq_n_generators(basis, q);
        const ResidualReport qchev = verify_chevalley(deformed);
        log.record(tag("q-chevalley", {{"n", n}, {"M", m}, {"q", q}}), qchev.max_residual(), qchev.tolerance);
        if (n > 2) {
          log.record(tag("q-serre", {{"n", n}, {"M", m}, {"q", q}}), verify_serre(deformed).max_residual(),
                     1e-12 * dim);
        }
      }
      const ChevalleyGenerators at_one = suq_n_generators(basis, 1.0);
      double diff = 0.0;
      for (int i = 0; i < classical.rank(); ++i) {
        diff = std::max({diff, max_norm(at_one.e[i] - classical.e[i]), max_norm(at_one.f[i] - classical.f[i]),
                         max_norm(at_one.h[i] - classical.h[i])});
      }
      log.record(tag("q1-classical", {{"n", n}, {"M", m}}), diff, 1e-14);
      const ResidualReport rebuilt = verify_number_reconstruction(basis);
      log.record(tag("number-reconstruction", {{"n", n}, {"M", m}}), rebuilt.max_residual(), rebuilt.tolerance);
    }
  }
  for (double gamma : {0.0, 2.0, 8.0}) {
    const ResidualReport al = verify_al_relations(al_oscillator_ops(20, gamma));
    log.record(tag("al-oscillator", {{"gamma", gamma}}), al.max_residual(), al.tolerance);
  }
}

void verify_spectral(const VerifyParams& p, CheckLog& log) {
  for (Model model : {Model::kQdnls, Model::kQal}) {
    for (double gamma : {0.0, 2.0, 8.0}) {
      double eig = 0.0, df = 0.0, complete = 0.0, resid = 0.0, parity = 0.0;
      for (int two_j = 1; two_j <= p.two_j_max; ++two_j) {
        const TridiagonalHamiltonian h = build_dimer(model, two_j, gamma);
        const Spectrum s = solve(h);
        const Spectrum oracle = dense_oracle(h);
        for (int a = 0; a < s.dim(); ++a) {
          const double ref = oracle.eigenvalues[a];
          eig = std::max(eig, std::abs(s.eigenvalues[a] - ref) / std::max(1.0, std::abs(ref)));
        }
        df = std::max(df, df_orthonormality_check(s).residual() / s.dim());
        complete = std::max(complete, completeness_check(s) / s.dim());
        resid = std::max(resid, max_eigen_residual(s) / std::max(1.0, h.inf_norm()));
        if (model == Model::kQal) {
          const ParityReport pr = parity_structure_check(s, 1e-10 * std::max(1.0, h.inf_norm()));
          parity = std::max(parity, pr.passed ? 0.0 : 1.0);
        }
      }
      const std::string m = model_name(model);
      log.record(tag("oracle-" + m, {{"gamma", gamma}}), eig, 1e-10);
      log.record(tag("df-orthonormality-" + m, {{"gamma", gamma}}), df, 1e-9);
      log.record(tag("completeness-" + m, {{"gamma", gamma}}), complete, 1e-9);
      log.record(tag("eigen-residual-" + m, {{"gamma", gamma}}), resid, 1e-10);
      if (model == Model::kQal) log.record(tag("parity-al", {{"gamma", gamma}}), parity, 0.0);
    }
  }
}

void verify_conservation(const VerifyParams& p, CheckLog& log) {
  for (double gamma : {0.0, 1.0, 5.0}) {
    for (int n = 2; n <= 3; ++n) {
      for (Model model : {Model::kQdnls, Model::kQal}) {
        const int m_top = model == Model::kQal && n == 2 ? 2 * p.m_max : p.m_max;
        for (int m = 0; m <= m_top; ++m) {
          const ConservationReport r = conservation_suite(model, n, m, gamma);
          for (const ConservationEntry& e : r.pairs) {
            log.record(tag(model_name(model) + e.label, {{"n", n}, {"M", m}, {"gamma", gamma}}), e.norm,
                       e.tolerance);
          }
        }
      }
    }
    for (Model model : {Model::kQdnls, Model::kQal}) {
      const LeakageReport leak = sector_leakage(model, 3, 3, gamma);
      log.record(tag("leakage-" + model_name(model), {{"gamma", gamma}}), leak.cross_sector, 0.0);
      log.record(tag("truncation-" + model_name(model), {{"gamma", gamma}}), leak.sector_mismatch, 1e-12);
      double worst = 0.0;
      for (int m = 0; m <= 3 * p.m_max; ++m) {
        const std::vector<double> fock = sector_spectrum(
            model == Model::kQdnls ? build_qdnls_chain(build_sector_basis(2, m), gamma)
                                   : build_qal_chain(build_sector_basis(2, m), gamma));
        const std::vector<double> dimer = chain_energies_from_dimer(model, m, gamma);
        for (std::size_t k = 0; k < fock.size(); ++k) {
          worst = std::max(worst, std::abs(fock[k] - dimer[k]) / std::max(1.0, std::abs(fock[k])));
        }
      }
      log.record(tag("chain-dimer-" + model_name(model), {{"gamma", gamma}}), worst, 1e-12);
    }
  }
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void cmd_spectrum(const SpectrumParams& p, std::ostream& out) {
  check_two_j(p.two_j);
  check_gamma(p.model, p.gamma);
  check_tol(p.tol);
  const TridiagonalHamiltonian h = build_dimer(p.model, p.two_j, p.gamma, p.epsilon);
  const Spectrum s = solve(h, p.tol);
  out << echo_line({{"command", "spectrum"},
                    {"model", model_name(p.model)},
                    {"two_j", std::to_string(p.two_j)},
                    {"gamma", format_number(p.gamma)},
                    {"epsilon", format_number(p.model == Model::kQdnls ? p.epsilon : 1.0)},
                    {"tol", format_number(p.tol)},
                    {"scale", format_number(h.dropped.scale)},
                    {"shift", format_number(h.dropped.shift)},
                    {"version", kVersion}});
  out << "index,eigenvalue,norm_constant\n";
  for (int a = 0; a < s.dim(); ++a) {
    out << a << "," << format_number(s.eigenvalues[a]) << "," << format_number(s.norm_constants[a]) << "\n";
  }
}

std::vector<double> expand_grid(const GammaGrid& g) {
  if (!std::isfinite(g.gamma_min) || !std::isfinite(g.gamma_max) || !(g.gamma_min < g.gamma_max)) {
    throw UsageError("need finite --gamma-min < --gamma-max");
  }
  if (g.steps < 2) throw UsageError("--steps must be >= 2");
  if (g.scale == GridScale::kLog && !(g.gamma_min > 0.0)) {
    throw UsageError("log scale needs --gamma-min > 0");
  }
  std::vector<double> grid(static_cast<std::size_t>(g.steps));
  const double last = g.steps - 1;
  for (int i = 0; i < g.steps; ++i) {
    const double t = i / last;
    grid[i] = g.scale == GridScale::kLinear
                  ? g.gamma_min + t * (g.gamma_max - g.gamma_min)
                  : std::exp(std::log(g.gamma_min) + t * (std::log(g.gamma_max) - std::log(g.gamma_min)));
  }
  grid.front() = g.gamma_min;
  grid.back() = g.gamma_max;
  return grid;
}

SweepResult run_sweep(const SweepParams& p) {
  check_two_j(p.two_j);
  check_tol(p.tol);
  const std::vector<double> grid = expand_grid(p.grid);
  for (double g : grid) check_gamma(p.model, g);
  SweepResult result;
  result.params = p;
  result.rows.resize(grid.size());
  parallel_for(grid.size(), p.threads, [&](std::size_t i) {
    const TridiagonalHamiltonian h = build_dimer(p.model, p.two_j, grid[i], p.epsilon);
    result.rows[i] = {grid[i], h.dropped.scale, h.dropped.shift, eigenvalues_bisection(h, p.tol)};
  });
  return result;
}

void cmd_sweep(const SweepParams& p, std::ostream& out) {
  const SweepResult r = run_sweep(p);
  out << echo_line({{"command", "sweep"},
                    {"model", model_name(p.model)},
                    {"two_j", std::to_string(p.two_j)},
                    {"gamma_min", format_number(p.grid.gamma_min)},
                    {"gamma_max", format_number(p.grid.gamma_max)},
                    {"steps", std::to_string(p.grid.steps)},
                    {"scale", p.grid.scale == GridScale::kLog ? "log" : "linear"},
                    {"epsilon", format_number(p.model == Model::kQdnls ? p.epsilon : 1.0)},
                    {"tol", format_number(p.tol)},
                    {"version", kVersion}});
  out << "gamma,energy_scale,energy_shift";
  for (int a = 0; a <= p.two_j; ++a) out << ",lambda_" << a;
  out << "\n";
  for (const SweepRow& row : r.rows) {
    out << format_number(row.gamma) << "," << format_number(row.scale) << "," << format_number(row.shift);
    for (double x : row.eigenvalues) out << "," << format_number(x);
    out << "\n";
  }
}

GapAnalysis run_gaps(const GapParams& p) {
  check_two_j(p.two_j);
  check_tol(p.tol);
  if (p.pairs < 1 || 2 * p.pairs > p.two_j + 1) {
    throw UsageError("--pairs must be in 1.." + std::to_string((p.two_j + 1) / 2) + " for two_j = " +
                     std::to_string(p.two_j));
  }
  GapAnalysis a;
  a.params = p;
  a.gamma = expand_grid(p.grid);
  const std::size_t n = a.gamma.size();
  a.gap.assign(static_cast<std::size_t>(p.pairs), std::vector<double>(n, kNaN));
  a.slope.assign(static_cast<std::size_t>(p.pairs), std::vector<double>(n, kNaN));
  parallel_for(n, p.threads, [&](std::size_t i) {
    const TridiagonalHamiltonian h = build_qdnls_dimer(p.two_j, a.gamma[i], p.epsilon);
    const std::vector<double> e = chain_energies(h, eigenvalues_bisection(h, p.tol));
    for (int k = 0; k < p.pairs; ++k) a.gap[k][i] = e[2 * k + 1] - e[2 * k];
  });
  a.steepest_gamma.assign(static_cast<std::size_t>(p.pairs), kNaN);
  for (int k = 0; k < p.pairs; ++k) {
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::log(a.gamma[i]);
      y[i] = std::log(a.gap[k][i]);
    }
    double steepest = -1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      a.slope[k][i] = (y[i + 1] - y[i - 1]) / (x[i + 1] - x[i - 1]);
      const double right = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
      const double left = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
      const double second = std::abs((right - left) / (0.5 * (x[i + 1] - x[i - 1])));
      if (second > steepest) {
        steepest = second;
        a.steepest_gamma[k] = a.gamma[i];
      }
    }
  }
  return a;
}

void cmd_gaps(const GapParams& p, std::ostream& out) {
  const GapAnalysis a = run_gaps(p);
  out << echo_line({{"command", "gaps"},
                    {"model", "dnls"},
                    {"two_j", std::to_string(p.two_j)},
                    {"pairs", std::to_string(p.pairs)},
                    {"gamma_min", format_number(p.grid.gamma_min)},
                    {"gamma_max", format_number(p.grid.gamma_max)},
                    {"steps", std::to_string(p.grid.steps)},
                    {"scale", p.grid.scale == GridScale::kLog ? "log" : "linear"},
                    {"epsilon", format_number(p.epsilon)},
                    {"tol", format_number(p.tol)},
                    {"version", kVersion}});
  out << "gamma,ln_gamma";
  for (int k = 1; k <= p.pairs; ++k) out << ",gap_" << k << ",ln_gap_" << k << ",slope_" << k;
  out << "\n";
  for (std::size_t i = 0; i < a.gamma.size(); ++i) {
    out << format_number(a.gamma[i]) << "," << format_number(std::log(a.gamma[i]));
    for (int k = 0; k < p.pairs; ++k) {
      out << "," << format_number(a.gap[k][i]) << "," << format_number(std::log(a.gap[k][i])) << ","
          << format_number(a.slope[k][i]);
    }
    out << "\n";
  }
  for (int k = 0; k < p.pairs; ++k) {
    out << "# steepest_change pair=" << k + 1 << " gamma=" << format_number(a.steepest_gamma[k]) << "\n";
  }
}

void cmd_quanta_scan(const QuantaScanParams& p, std::ostream& out) {
  check_gamma(Model::kQal, p.gamma);
  check_tol(p.tol);
  if (p.two_j_max < 1) throw UsageError("--two-j-max must be >= 1");
  if (p.levels < 1) throw UsageError("--levels must be >= 1");
  out << echo_line({{"command", "quanta-scan"},
                    {"model", "al"},
                    {"gamma", format_number(p.gamma)},
                    {"two_j_max", std::to_string(p.two_j_max)},
                    {"levels", std::to_string(p.levels)},
                    {"tol", format_number(p.tol)},
                    {"version", kVersion}});
  out << "two_j,level,energy\n";
  for (int two_j = 1; two_j <= p.two_j_max; ++two_j) {
    const TridiagonalHamiltonian h = build_qal_dimer(two_j, p.gamma);
    const std::vector<double> e = chain_energies(h, eigenvalues_bisection(h, p.tol));
    for (int k = 0; k < std::min<int>(p.levels, static_cast<int>(e.size())); ++k) {
      out << two_j << "," << k << "," << format_number(e[k]) << "\n";
    }
  }
}

bool cmd_verify(const VerifyParams& p, std::ostream& out) {
  const std::string& s = p.suite;
  if (s != "algebra" && s != "spectral" && s != "conservation" && s != "all") {
    throw UsageError("--suite must be algebra, spectral, conservation or all");
  }
  if (p.two_j_max < 1) throw UsageError("--two-j-max must be >= 1");
  if (p.m_max < 0 || p.m_max > 6) throw UsageError("--m-max must be in 0..6");
  CheckLog log{out, p.inject_failure};
  if (s == "algebra" || s == "all") verify_algebra(p, log);
  if (s == "spectral" || s == "all") verify_spectral(p, log);
  if (s == "conservation" || s == "all") verify_conservation(p, log);
  out << "summary suite=" << s << " checks=" << log.total << " failed=" << log.failed
      << " status=" << (log.failed == 0 ? "PASS" : "FAIL") << "\n";
  return log.failed == 0;
}

}  // namespace qdimer
