#ifndef QDIMER_SPECTRAL_HPP
#define QDIMER_SPECTRAL_HPP

#include "qdimer/dimer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace qdimer {

/// Result of running the characteristic-polynomial recurrence at lambda.
///
/// The recurrence p_{k+1} = (lambda - d_k) p_k - o_{k-1}^2 p_{k-1} starts from
/// p_0 = 1 and is rescaled by powers of two to stay inside [2^-512, 2^512].
/// The true final value is value * 2^log2_scale.
struct SturmEvaluation {
  double lambda = 0.0;
  double value = 0.0;
  long log2_scale = 0;
  int count_below = 0;  // eigenvalues strictly below lambda
};

/// Throws std::domain_error for NaN lambda.
SturmEvaluation sturm_eval(const TridiagonalHamiltonian& h, double lambda);

/// [lower, upper] enclosing the spectrum.
std::pair<double, double> gershgorin_bounds(const TridiagonalHamiltonian& h);

/// All eigenvalues, ascending, by bisection on the Sturm count.
///
/// Each bracket is shrunk until its width is at most
/// tol * max(1, min(|lo|, |hi|)) or it cannot be split further.
std::vector<double> eigenvalues_bisection(const TridiagonalHamiltonian& h, double tol = 1e-12);

enum class VectorPath {
  kRecurrence,        // forward recurrence psi_k / epsilon_k
  kParityBlock,       // recurrence or inverse iteration on a reflection block
  kInverseIteration,  // inverse iteration on the full matrix
  kOracle,            // dense solver
};

const char* path_name(VectorPath path);

struct EigenvectorResult {
  std::vector<double> coefficients;  // unit norm, first nonzero entry positive
  double norm_constant = 0.0;        // coefficients[0] relative to the seed psi_{-j} = 1
  double residual = 0.0;             // max |H c - lambda c|
  VectorPath path = VectorPath::kRecurrence;
};

/// Eigenvector for a converged eigenvalue from the normalized recurrence.
///
/// Falls back to inverse iteration when the recurrence residual is too large.
/// Throws std::domain_error when lambda is not an eigenvalue of h.
EigenvectorResult eigenvector_from_recurrence(const TridiagonalHamiltonian& h, double lambda);

/// epsilon_k = sqrt(k! prod_{i<k} (2j - i)) for the DNLS dimer and
/// sqrt([k]! prod_{i<k} [2j - i]) for the AL dimer, k = 0 .. 2j.
/// These equal the products of the unit-coupling off-diagonal elements.
std::vector<double> log_epsilon_factors(int two_j, Model model, double gamma);
/// Throws std::overflow_error when a factor is not representable.
std::vector<double> epsilon_factors(int two_j, Model model, double gamma);

/// Eigen-decomposition of a dimer.
struct Spectrum {
  TridiagonalHamiltonian hamiltonian;
  std::vector<double> eigenvalues;  // ascending
  Eigen::MatrixXd vectors;          // column a belongs to eigenvalues[a]
  std::vector<double> norm_constants;
  std::vector<double> epsilon_factors;
  std::vector<VectorPath> paths;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
};

/// Bisection eigenvalues plus recurrence eigenvectors.
///
/// Eigenvalues whose recurrence vector is not resolved (small residual but a
/// tiny gap to a neighbour) are rebuilt on the even/odd reflection blocks when
/// the Hamiltonian is reflection symmetric, otherwise by inverse iteration
/// with reorthogonalization inside the cluster.
Spectrum solve(const TridiagonalHamiltonian& h, double tol = 1e-12);

/// Dense symmetric tridiagonal QR reference solver.
Spectrum dense_oracle(const TridiagonalHamiltonian& h);

struct OrthonormalityReport {
  double max_diagonal = 0.0;      // max |N_a^2 sum_k psi_k(a)^2 / eps_k^2 - 1|
  double max_off_diagonal = 0.0;  // max |N_a N_b sum_k psi_k(a) psi_k(b) / eps_k^2|
  double residual() const { return std::max(max_diagonal, max_off_diagonal); }
};

/// Pairwise Darboux-Christoffel sums in the (psi, epsilon, N) representation.
OrthonormalityReport df_orthonormality_check(const Spectrum& spectrum);

/// Relative difference between sum_k p_k(x)^2 / w_k^2 and the closed form
/// p_N'(x) p_{N-1}(x) / w_{N-1}^2 at an eigenvalue x, where w_k is the product
/// of the first k off-diagonal elements. Uses the forward recurrence, so it
/// is only meaningful where that recurrence is accurate.
double christoffel_darboux_residual(const TridiagonalHamiltonian& h, double x);

/// max |sum_a v_a v_a^T - I|.
double completeness_check(const Spectrum& spectrum);

/// max |H v_a - lambda_a v_a| over all eigenpairs.
double max_eigen_residual(const Spectrum& spectrum);

/// Smallest difference of consecutive eigenvalues (infinity for dim 1).
double min_gap(const std::vector<double>& eigenvalues);

struct ParityReport {
  double max_antisymmetry = 0.0;  // max |lambda_a + lambda_{dim-1-a}|
  int zero_count = 0;
  int expected_zero_count = 0;
  std::vector<int> offending;  // indices violating antisymmetry or the zero rule
  bool passed = false;
};

/// Spectrum of an AL dimer: symmetric under lambda -> -lambda with exactly one
/// zero for even two_j and none for odd two_j. Throws std::invalid_argument
/// for a DNLS spectrum.
ParityReport parity_structure_check(const Spectrum& spectrum, double tol = 1e-10);

/// Coefficients (ascending powers) of the characteristic polynomial
/// psi_{j+1}(lambda), built by multiply-accumulate on coefficient arrays.
std::vector<double> characteristic_polynomial(const TridiagonalHamiltonian& h);

/// True when diag and off are mirror symmetric about the centre.
bool is_reflection_symmetric(const TridiagonalHamiltonian& h);

}  // namespace qdimer

#endif  // QDIMER_SPECTRAL_HPP
