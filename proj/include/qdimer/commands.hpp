#ifndef QDIMER_COMMANDS_HPP
#define QDIMER_COMMANDS_HPP

#include "qdimer/dimer.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdimer {

inline constexpr const char* kVersion = "0.1.0";

/// Bad flag values; the executable maps it to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Round-trip-safe text with up to 17 significant digits, independent of the
/// locale. Negative zero prints as 0.
std::string format_number(double x);

struct SpectrumParams {
  Model model = Model::kQdnls;
  int two_j = 2;
  double gamma = 0.0;
  double epsilon = 1.0;
  double tol = 1e-12;
};

void cmd_spectrum(const SpectrumParams& params, std::ostream& out);

enum class GridScale { kLinear, kLog };

struct GammaGrid {
  double gamma_min = 0.0;
  double gamma_max = 10.0;
  int steps = 21;
  GridScale scale = GridScale::kLinear;
};

/// Validates and expands the grid; the last point is exactly gamma_max.
std::vector<double> expand_grid(const GammaGrid& grid);

struct SweepParams {
  Model model = Model::kQdnls;
  int two_j = 6;
  GammaGrid grid;
  double epsilon = 1.0;
  double tol = 1e-12;
  unsigned threads = 0;  // 0 picks the hardware concurrency
};

struct SweepRow {
  double gamma = 0.0;
  double scale = 0.0;
  double shift = 0.0;
  std::vector<double> eigenvalues;  // dimer eigenvalues, ascending
};

struct SweepResult {
  SweepParams params;
  std::vector<SweepRow> rows;  // in grid order
};

SweepResult run_sweep(const SweepParams& params);
void cmd_sweep(const SweepParams& params, std::ostream& out);

struct GapParams {
  int two_j = 6;
  int pairs = 2;
  GammaGrid grid{0.25, 16.0, 25, GridScale::kLog};
  double epsilon = 1.0;
  double tol = 1e-12;
  unsigned threads = 0;
};

/// Pair k (1 based) has gap E_{2k-1} - E_{2k-2} of the ascending two-site
/// chain energies, so pair 1 is the lowest doublet.
struct GapAnalysis {
  GapParams params;
  std::vector<double> gamma;
  std::vector<std::vector<double>> gap;    // [pair][grid point]
  std::vector<std::vector<double>> slope;  // NaN at the two end points
  std::vector<double> steepest_gamma;      // per pair, max |second difference|
};

GapAnalysis run_gaps(const GapParams& params);
void cmd_gaps(const GapParams& params, std::ostream& out);

struct QuantaScanParams {
  double gamma = 2.0;
  int two_j_max = 10;
  int levels = 4;
  double tol = 1e-12;
};

void cmd_quanta_scan(const QuantaScanParams& params, std::ostream& out);

struct VerifyParams {
  std::string suite = "all";  // algebra | spectral | conservation | all
  int two_j_max = 20;
  int m_max = 4;
  bool inject_failure = false;
};

/// Writes one `check=... value=... tol=... status=...` line per check and a
/// final summary line. Returns true when every check passed.
bool cmd_verify(const VerifyParams& params, std::ostream& out);

}  // namespace qdimer

#endif  // QDIMER_COMMANDS_HPP
