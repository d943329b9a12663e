#include "qdimer/dimer.hpp"

#include "qdimer/qnumbers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdimer {

std::string model_name(Model model) { return model == Model::kQdnls ? "dnls" : "al"; }

Model parse_model(const std::string& name) {
  if (name == "dnls") return Model::kQdnls;
  if (name == "al") return Model::kQal;
  throw std::invalid_argument("unknown model '" + name + "' (expected dnls or al)");
}

SpinSector::SpinSector(int two_j_in) : two_j(two_j_in) {
  if (two_j < 0) {
    throw std::invalid_argument("SpinSector: two_j must be >= 0");
  }
}

std::vector<double> SpinSector::m_values() const {
  std::vector<double> out(static_cast<std::size_t>(dim()));
  for (int k = 0; k < dim(); ++k) out[k] = m(k);
  return out;
}

double TridiagonalHamiltonian::inf_norm() const {
  double worst = 0.0;
  const int n = dim();
  for (int k = 0; k < n; ++k) {
    double row = std::abs(diag[k]);
    if (k > 0) row += std::abs(off[k - 1]);
    if (k + 1 < n) row += std::abs(off[k]);
    worst = std::max(worst, row);
  }
  return worst;
}

namespace {

TridiagonalHamiltonian make_shell(int two_j, Model model, double gamma, double epsilon) {
  if (!std::isfinite(gamma) || !std::isfinite(epsilon)) {
    throw std::domain_error("dimer: gamma and epsilon must be finite");
  }
  TridiagonalHamiltonian h;
  h.sector = SpinSector(two_j);
  h.model = model;
  h.gamma = gamma;
  h.epsilon = epsilon;
  h.diag.assign(static_cast<std::size_t>(h.dim()), 0.0);
  h.off.assign(static_cast<std::size_t>(h.dim() - 1), 0.0);
  if (two_j == 0) {
    h.warnings.push_back("two_j = 0 gives a degenerate 1x1 Hamiltonian");
  }
  return h;
}

}  // namespace

TridiagonalHamiltonian build_qdnls_dimer(int two_j, double gamma, double epsilon) {
  TridiagonalHamiltonian h = make_shell(two_j, Model::kQdnls, gamma, epsilon);
  if (gamma < 0.0) {
    h.warnings.push_back("negative gamma flips the sign of the on-site nonlinearity");
  }
  if (epsilon == 0.0) {
    h.warnings.push_back("epsilon = 0 decouples the sites; the spectrum is degenerate");
  }
  const double j = h.sector.j();
  for (int k = 0; k < h.dim(); ++k) {
    const double m = h.sector.m(k);
    h.diag[k] = 0.5 * gamma * m * m;
    if (k + 1 < h.dim()) h.off[k] = epsilon * std::sqrt((j - m) * (j + m + 1.0));
  }
  h.dropped.scale = -1.0;
  h.dropped.shift = -gamma * two_j * two_j / 8.0;
  return h;
}

TridiagonalHamiltonian build_qal_dimer(int two_j, double gamma) {
  const DeformationParameter dp = q_from_gamma(gamma);
  TridiagonalHamiltonian h = make_shell(two_j, Model::kQal, gamma, 1.0);
  const double j = h.sector.j();
  for (int k = 0; k + 1 < h.dim(); ++k) {
    const double m = h.sector.m(k);
    h.off[k] = std::sqrt(sym_qnum(j - m, dp.q) * sym_qnum(j + m + 1.0, dp.q));
  }
  // b1^dag b2 = q^{(1 - M)/2} a1^dag a2 on the sector with M = two_j quanta
  h.dropped.scale = -std::pow(dp.q, 0.5 * (1.0 - two_j));
  h.dropped.shift = 2.0 * two_j;
  return h;
}

TridiagonalHamiltonian build_dimer(Model model, int two_j, double gamma, double epsilon) {
  return model == Model::kQdnls ? build_qdnls_dimer(two_j, gamma, epsilon)
                                : build_qal_dimer(two_j, gamma);
}

}  // namespace qdimer
