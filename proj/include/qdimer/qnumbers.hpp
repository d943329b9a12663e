#ifndef QDIMER_QNUMBERS_HPP
#define QDIMER_QNUMBERS_HPP

namespace qdimer {

/// Below this distance from q = 1 the q-numbers are replaced by their
/// classical limits.
inline constexpr double kClassicalThreshold = 1e-8;

/// Nonlinearity strength together with the deformation parameter it induces.
///
/// The Ablowitz-Ladik oscillator corresponds to q = 1/sqrt(1 + gamma/2), so
/// q lies in (0, 1] and s = ln q is nonpositive.
struct DeformationParameter {
  double gamma = 0.0;
  double q = 1.0;
  double s = 0.0;
};

/// Throws std::domain_error for negative or non-finite gamma.
DeformationParameter q_from_gamma(double gamma);

/// Symmetric q-number [x] = (q^x - q^-x) / (q - q^-1).
double sym_qnum(double x, double q);

/// Basic number {n} = ((1 + gamma/2)^n - 1) / (gamma/2), the eigenvalue of
/// b^dagger b on |n> for the AL oscillator. Equals n at gamma = 0.
double basic_qnum(int n, double gamma);

/// [m]! = [1][2]...[m], with [0]! = 1.
double q_factorial(int m, double q);

/// [m]! / ([n]! [m-n]!). Throws std::domain_error unless 0 <= n <= m.
double q_binomial(int m, int n, double q);

}  // namespace qdimer

#endif  // QDIMER_QNUMBERS_HPP
