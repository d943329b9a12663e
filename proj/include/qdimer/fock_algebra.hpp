#ifndef QDIMER_FOCK_ALGEBRA_HPP
#define QDIMER_FOCK_ALGEBRA_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdimer {

/// Occupation tuple (n_1, ..., n_sites).
using Occupation = std::vector<int>;

/// Basis of the fixed-total-quanta sector of an n-site boson chain.
///
/// States are ordered lexicographically descending, so the first state is
/// (M, 0, ..., 0) and the last is (0, ..., 0, M). Site indices in this API
/// are zero based.
class FockSectorBasis {
 public:
  FockSectorBasis(int n_sites, int total_quanta);

  int n_sites() const { return n_sites_; }
  int total_quanta() const { return total_quanta_; }
  std::size_t dim() const { return states_.size(); }
  const std::vector<Occupation>& states() const { return states_; }
  const Occupation& state(std::size_t index) const { return states_.at(index); }

  /// Position of an occupation tuple, or dim() when it is not in the sector.
  std::size_t index_of(const Occupation& occ) const;

  /// Number operator N_site as a diagonal matrix.
  Eigen::MatrixXd number_operator(int site) const;

 private:
  int n_sites_;
  int total_quanta_;
  std::vector<Occupation> states_;
  std::map<Occupation, std::size_t> lookup_;
};

using BasisPtr = std::shared_ptr<const FockSectorBasis>;

/// Sector dimensions above this are refused with std::length_error.
inline constexpr std::size_t kMaxSectorDim = 1000000;

/// C(M + n - 1, n - 1), saturating at SIZE_MAX.
std::size_t sector_dimension(int n_sites, int total_quanta);

BasisPtr build_sector_basis(int n_sites, int total_quanta);

/// Matrix image of an operator restricted to one sector.
struct SectorOperator {
  BasisPtr basis;
  Eigen::MatrixXd matrix;
};

/// a_i^dagger a_j with canonical elements sqrt(n_i + 1) sqrt(n_j).
SectorOperator hop_operator(const BasisPtr& basis, int i, int j);

/// a_i^dagger a_j for q-bosons, elements sqrt([n_i + 1][n_j]).
SectorOperator q_hop_operator(const BasisPtr& basis, int i, int j, double q);

/// Chevalley generators of su(n) (deformed == false) or su_q(n).
///
/// e[i], f[i], h[i] for i = 0 .. n_sites - 2. The deformed set also carries
/// k[i] = q^{h_i} and c[i] = q^{(N_i + N_{i+1})/2}.
struct ChevalleyGenerators {
  BasisPtr basis;
  double q = 1.0;
  bool deformed = false;
  std::vector<Eigen::MatrixXd> e, f, h, k, c;

  int rank() const { return static_cast<int>(e.size()); }
};

ChevalleyGenerators su_n_generators(const BasisPtr& basis);
ChevalleyGenerators suq_n_generators(const BasisPtr& basis, double q);

/// alpha_ij = 2 delta_ij - delta_{i,j+1} - delta_{i,j-1}, size (n-1) x (n-1).
Eigen::MatrixXi cartan_matrix(int n);

struct Residual {
  std::string label;
  double norm = 0.0;
};

/// Max-norm residuals of a family of operator identities.
struct ResidualReport {
  std::vector<Residual> residuals;
  double tolerance = 0.0;
  bool vacuous = false;

  double max_residual() const;
  bool passed() const { return max_residual() <= tolerance; }
};

/// Largest absolute entry.
double max_norm(const Eigen::MatrixXd& m);

inline Eigen::MatrixXd commutator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a * b - b * a;
}

/// Applies a scalar function to the diagonal of a diagonal matrix. Throws
/// std::invalid_argument if the input has off-diagonal entries.
template <typename Fn>
Eigen::MatrixXd diagonal_function(const Eigen::MatrixXd& diag_op, Fn&& fn);

/// Cartan-Chevalley relations, tolerance 1e-12 * dim.
ResidualReport verify_chevalley(const ChevalleyGenerators& gens);

/// Serre (q-Serre for deformed generators) relations for all i != j.
/// Rank-1 input gives an empty report flagged vacuous.
ResidualReport verify_serre(const ChevalleyGenerators& gens);

/// Truncated Fock-space matrices of one AL oscillator.
struct AlOscillator {
  int n_max = 0;
  double gamma = 0.0;
  Eigen::MatrixXd b;
  Eigen::MatrixXd b_dag;
  Eigen::MatrixXd number;
};

/// b|n> = sqrt({n}) |n-1>, N|n> = n|n> on span{|0>, ..., |n_max>}.
AlOscillator al_oscillator_ops(int n_max, double gamma);

/// [b, b^dagger] = 1 + (gamma/2) b^dagger b and
/// N = ln(1 + (gamma/2) b^dagger b) / ln(1 + gamma/2), both relative to the
/// size of the right-hand side, on the rows and columns n < n_max.
ResidualReport verify_al_relations(const AlOscillator& osc);

/// Operator-valued generator matrix E of gl(n) realized on the sector.
///
/// Upper entries follow E_ab = E_ac E_cb - E_cb E_ac with
/// E_{a,a+1} = e_a, lower entries are the adjoints, and the diagonal holds
/// the traceless Cartan elements N_a - h/n.
struct GeneratorMatrix {
  int n = 0;
  std::vector<Eigen::MatrixXd> entries;  // row major, n * n

  const Eigen::MatrixXd& operator()(int a, int b) const { return entries[a * n + b]; }
};

/// Which intermediate index c in (a, b) the commutator recursion uses.
enum class ChainSplit { kFirst, kLast };

GeneratorMatrix generator_matrix(const ChevalleyGenerators& gens,
                                 ChainSplit split = ChainSplit::kFirst);

/// C_{2p} = sum_a (M^p)_aa with M_ab = sum_c E_ac F_cb and F = E^dagger.
/// Only for undeformed generators; throws std::invalid_argument otherwise.
SectorOperator casimir_matrix(const ChevalleyGenerators& gens, int p);

/// J0 (J0 - 1) + J+ J- for rank-1 undeformed generators.
SectorOperator su2_casimir(const ChevalleyGenerators& gens);

/// [J0][J0 - 1] + J+ J- for rank-1 generators at the generators' q.
SectorOperator suq2_casimir(const ChevalleyGenerators& gens);

/// Omega: rows 0..n-2 carry +1 on the diagonal and -1 right of it, last row
/// all ones.
Eigen::MatrixXd omega_matrix(int n);

/// Residual of N_i = sum_j Omega^-1_ij (2 h_j) + Omega^-1_{i,n-1} h.
ResidualReport verify_number_reconstruction(const BasisPtr& basis);

// ---------------------------------------------------------------------------

template <typename Fn>
Eigen::MatrixXd diagonal_function(const Eigen::MatrixXd& diag_op, Fn&& fn) {
  const Eigen::Index n = diag_op.rows();
  Eigen::MatrixXd off = diag_op;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("diagonal_function: operator is not diagonal");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i, i) = fn(diag_op(i, i));
  }
  return out;
}

}  // namespace qdimer

#endif  // QDIMER_FOCK_ALGEBRA_HPP
