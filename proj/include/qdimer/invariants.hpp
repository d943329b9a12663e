#ifndef QDIMER_INVARIANTS_HPP
#define QDIMER_INVARIANTS_HPP

#include "qdimer/dimer.hpp"
#include "qdimer/fock_algebra.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qdimer {

/// Open DNLS chain -epsilon sum_i (a_{i+1} + a_{i-1}) a_i^dag - (gamma/2) sum_i N_i^2.
///
/// On two sites this is -dimer(epsilon, 2 gamma) - gamma M^2 / 4.
SectorOperator build_qdnls_chain(const BasisPtr& basis, double gamma, double epsilon = 1.0);

/// Open AL chain -sum_i b_i^dag (b_{i+1} + b_{i-1}) + 2 sum_i N_i, where N_i
/// is rebuilt from b_i^dag b_i through the logarithm identity.
SectorOperator build_qal_chain(const BasisPtr& basis, double gamma);

struct CommuteResult {
  double norm = 0.0;
  bool passed = false;
};

/// max |HO - OH| against tol. Throws std::invalid_argument on a size mismatch.
CommuteResult check_commutes(const Eigen::MatrixXd& h, const Eigen::MatrixXd& o, double tol);

struct ConservationEntry {
  std::string label;
  double norm = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct ConservationReport {
  Model model = Model::kQdnls;
  int n_sites = 0;
  int total_quanta = 0;
  double gamma = 0.0;
  double epsilon = 1.0;
  std::vector<ConservationEntry> pairs;

  bool passed() const;
};

/// Largest sector handled by conservation_suite.
inline constexpr std::size_t kConservationMaxDim = 400;

/// Commutators of the chain Hamiltonian with its conserved operators.
///
/// DNLS: C_2, C_4 (n_sites <= 3) and h. AL: h, plus C_q for two sites or the
/// q-Chevalley relations for three. Tolerances are 1e-10 * dim except C_4 at
/// 1e-8 * dim and h at exactly zero. Throws std::invalid_argument for
/// n_sites outside {2, 3} or a sector larger than kConservationMaxDim.
ConservationReport conservation_suite(Model model, int n_sites, int total_quanta, double gamma,
                                      double epsilon = 1.0);

/// Chain Hamiltonian on the truncated product space (every site holds
/// 0..n_max quanta), built from Kronecker products of one-site matrices.
struct TruncatedSpace {
  int n_sites = 0;
  int n_max = 0;
  std::vector<Occupation> states;  // site 0 varies slowest
  Eigen::MatrixXd hamiltonian;
};

TruncatedSpace truncated_chain(Model model, int n_sites, int n_max, double gamma,
                               double epsilon = 1.0);

struct LeakageReport {
  double cross_sector = 0.0;    // max |H_xy| with different total quanta
  double sector_mismatch = 0.0; // max difference to the sector matrices, M <= n_max
};

/// Block structure of the truncated chain against the per-sector builders.
LeakageReport sector_leakage(Model model, int n_sites, int n_max, double gamma,
                             double epsilon = 1.0);

/// Two-site chain energies predicted from the dimer spectrum through the
/// dropped constants, ascending. The DNLS dimer is built at 2 * gamma.
std::vector<double> chain_energies_from_dimer(Model model, int total_quanta, double gamma,
                                              double epsilon = 1.0, double tol = 1e-15);

/// Ascending eigenvalues of a symmetric sector operator.
std::vector<double> sector_spectrum(const SectorOperator& op);

}  // namespace qdimer

#endif  // QDIMER_INVARIANTS_HPP
