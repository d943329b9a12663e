#ifndef QDIMER_DIMER_HPP
#define QDIMER_DIMER_HPP

#include <string>
#include <vector>

namespace qdimer {

enum class Model { kQdnls, kQal };

/// "dnls" / "al".
std::string model_name(Model model);
/// Parses "dnls" or "al"; throws std::invalid_argument otherwise.
Model parse_model(const std::string& name);

/// Spin-j representation space, j = two_j / 2, basis m = -j, ..., j.
struct SpinSector {
  int two_j = 0;

  explicit SpinSector(int two_j);

  double j() const { return 0.5 * two_j; }
  int dim() const { return two_j + 1; }
  /// m value of basis index k (k = 0 is m = -j).
  double m(int k) const { return -j() + k; }
  std::vector<double> m_values() const;
};

/// Constants removed when reducing a chain Hamiltonian to its dimer form.
///
/// The two-site chain energy is scale * lambda + shift for every dimer
/// eigenvalue lambda.
struct DroppedConstants {
  double scale = 1.0;
  double shift = 0.0;
};

/// Symmetric tridiagonal Hamiltonian in the (q-)spin basis.
///
/// diag[k] is the element at m = -j + k, off[k] couples m = -j + k to m + 1.
struct TridiagonalHamiltonian {
  SpinSector sector{0};
  Model model = Model::kQdnls;
  double gamma = 0.0;
  double epsilon = 1.0;
  std::vector<double> diag;
  std::vector<double> off;
  DroppedConstants dropped;
  std::vector<std::string> warnings;

  int dim() const { return sector.dim(); }
  /// Max absolute row sum.
  double inf_norm() const;
};

/// H = epsilon (J+ + J-) + (gamma/2) J0^2.
///
/// Dropped constants map onto the open two-site chain
/// -epsilon (a1^dag a2 + a2^dag a1) - (gamma_c/2) (N1^2 + N2^2) with
/// gamma_c = gamma / 2.
TridiagonalHamiltonian build_qdnls_dimer(int two_j, double gamma, double epsilon = 1.0);

/// H = J+^q + J-^q with q = 1/sqrt(1 + gamma/2).
///
/// Dropped constants map onto the two-site AL chain
/// -(b1^dag b2 + b2^dag b1) + 2 (N1 + N2).
TridiagonalHamiltonian build_qal_dimer(int two_j, double gamma);

/// Dispatches on the model; epsilon is ignored for the AL dimer.
TridiagonalHamiltonian build_dimer(Model model, int two_j, double gamma, double epsilon = 1.0);

}  // namespace qdimer

#endif  // QDIMER_DIMER_HPP
