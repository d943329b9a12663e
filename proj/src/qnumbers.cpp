#include "qdimer/qnumbers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qdimer {

DeformationParameter q_from_gamma(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::domain_error("q_from_gamma: gamma must be finite and >= 0, got " +
                            std::to_string(gamma));
  }
  DeformationParameter p;
  p.gamma = gamma;
  // s = ln q = -ln(1 + gamma/2) / 2, exact zero at gamma = 0
  p.s = -0.5 * std::log1p(0.5 * gamma);
  p.q = 1.0 / std::sqrt(1.0 + 0.5 * gamma);
  return p;
}

double sym_qnum(double x, double q) {
  if (!(q > 0.0)) {
    throw std::domain_error("sym_qnum: q must be positive");
  }
  if (std::abs(q - 1.0) < kClassicalThreshold) {
    return x;
  }
  // sinh form avoids the cancellation in q^x - q^-x for small ln q
  const double s = std::log(q);
  return std::sinh(x * s) / std::sinh(s);
}

double basic_qnum(int n, double gamma) {
  if (n < 0) {
    throw std::domain_error("basic_qnum: n must be >= 0");
  }
  if (gamma == 0.0) {
    return static_cast<double>(n);
  }
  const double g = 0.5 * gamma;
  return std::expm1(n * std::log1p(g)) / g;
}

double q_factorial(int m, double q) {
  if (m < 0) {
    throw std::domain_error("q_factorial: m must be >= 0");
  }
  double result = 1.0;
  for (int k = 2; k <= m; ++k) {
    result *= sym_qnum(k, q);
  }
  return result;
}

double q_binomial(int m, int n, double q) {
  if (n < 0 || m < 0 || n > m) {
    throw std::domain_error("q_binomial: need 0 <= n <= m, got m=" + std::to_string(m) +
                            " n=" + std::to_string(n));
  }
  // product form keeps intermediate values small
  const int k = n < m - n ? n : m - n;
  double result = 1.0;
  for (int i = 1; i <= k; ++i) {
    result *= sym_qnum(m - k + i, q) / sym_qnum(i, q);
  }
  return result;
}

}  // namespace qdimer
