#include "qdimer/invariants.hpp"

#include "qdimer/qnumbers.hpp"
#include "qdimer/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdimer {

namespace {

Eigen::MatrixXd chain_number_term(const BasisPtr& basis, double gamma) {
  const auto dim = static_cast<Eigen::Index>(basis->dim());
  const double g = 0.5 * gamma;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < basis->n_sites(); ++i) {
    // b_i^dag b_i has eigenvalue {n_i}
    const Eigen::MatrixXd bdb =
        diagonal_function(basis->number_operator(i), [gamma](double n) {
          return basic_qnum(static_cast<int>(std::lround(n)), gamma);
        });
    out += diagonal_function(bdb, [g](double x) {
      return g == 0.0 ? x : std::log1p(g * x) / std::log1p(g);
    });
  }
  return out;
}

SectorOperator al_hop(const BasisPtr& basis, int i, int j, double gamma) {
  const auto dim = static_cast<Eigen::Index>(basis->dim());
  SectorOperator op{basis, Eigen::MatrixXd::Zero(dim, dim)};
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Occupation& in = basis->state(col);
    if (in[j] == 0) continue;
    Occupation out = in;
    out[i] += 1;
    out[j] -= 1;
    const auto row = static_cast<Eigen::Index>(basis->index_of(out));
    op.matrix(row, col) = std::sqrt(basic_qnum(in[i] + 1, gamma) * basic_qnum(in[j], gamma));
  }
  return op;
}

void add_entry(ConservationReport& report, std::string label, double norm, double tol) {
  report.pairs.push_back({std::move(label), norm, tol, norm <= tol});
}

// One-site matrices on span{|0>, ..., |n_max>}.
Eigen::MatrixXd site_lowering(int n_max, Model model, double gamma) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) {
    a(n - 1, n) = std::sqrt(model == Model::kQal ? basic_qnum(n, gamma) : static_cast<double>(n));
  }
  return a;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  Eigen::MatrixXd out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      out.block(r * y.rows(), c * y.cols(), y.rows(), y.cols()) = x(r, c) * y;
  return out;
}

Eigen::MatrixXd embed(const Eigen::MatrixXd& one_site, int site, int n_sites) {
  const Eigen::Index d = one_site.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int s = 0; s < n_sites; ++s) {
    out = kron(out, s == site ? one_site : Eigen::MatrixXd::Identity(d, d));
  }
  return out;
}

}  // namespace

SectorOperator build_qdnls_chain(const BasisPtr& basis, double gamma, double epsilon) {
  const auto dim = static_cast<Eigen::Index>(basis->dim());
  SectorOperator h{basis, Eigen::MatrixXd::Zero(dim, dim)};
  for (int i = 0; i + 1 < basis->n_sites(); ++i) {
    h.matrix -= epsilon * (hop_operator(basis, i, i + 1).matrix + hop_operator(basis, i + 1, i).matrix);
  }
  for (int i = 0; i < basis->n_sites(); ++i) {
    const Eigen::MatrixXd n = basis->number_operator(i);
    h.matrix -= 0.5 * gamma * n * n;
  }
  return h;
}

SectorOperator build_qal_chain(const BasisPtr& basis, double gamma) {
  if (!(gamma >= 0.0)) {
    throw std::domain_error("build_qal_chain: gamma must be >= 0");
  }
  const auto dim = static_cast<Eigen::Index>(basis->dim());
  SectorOperator h{basis, Eigen::MatrixXd::Zero(dim, dim)};
  for (int i = 0; i + 1 < basis->n_sites(); ++i) {
    h.matrix -= al_hop(basis, i, i + 1, gamma).matrix + al_hop(basis, i + 1, i, gamma).matrix;
  }
  h.matrix += 2.0 * chain_number_term(basis, gamma);
  return h;
}

CommuteResult check_commutes(const Eigen::MatrixXd& h, const Eigen::MatrixXd& o, double tol) {
  if (h.rows() != h.cols() || o.rows() != o.cols() || h.rows() != o.rows()) {
    throw std::invalid_argument("check_commutes: operators must be square and of equal size");
  }
  CommuteResult out;
  out.norm = h.size() == 0 ? 0.0 : max_norm(commutator(h, o));
  out.passed = out.norm <= tol;
  return out;
}

bool ConservationReport::passed() const {
  return std::all_of(pairs.begin(), pairs.end(), [](const ConservationEntry& e) { return e.passed; });
}

ConservationReport conservation_suite(Model model, int n_sites, int total_quanta, double gamma,
                                      double epsilon) {
  if (n_sites != 2 && n_sites != 3) {
    throw std::invalid_argument("conservation_suite: n_sites must be 2 or 3");
  }
  if (sector_dimension(n_sites, total_quanta) > kConservationMaxDim) {
    throw std::invalid_argument("conservation_suite: sector too large");
  }
  const BasisPtr basis = build_sector_basis(n_sites, total_quanta);
  const double dim = static_cast<double>(basis->dim());
  ConservationReport report;
  report.model = model;
  report.n_sites = n_sites;
  report.total_quanta = total_quanta;
  report.gamma = gamma;
  report.epsilon = epsilon;

  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(basis->dim(), basis->dim());
  for (int i = 0; i < n_sites; ++i) total += basis->number_operator(i);

  if (model == Model::kQdnls) {
    const Eigen::MatrixXd h = build_qdnls_chain(basis, gamma, epsilon).matrix;
    const ChevalleyGenerators gens = su_n_generators(basis);
    add_entry(report, "[H,C2]", check_commutes(h, casimir_matrix(gens, 1).matrix, 0).norm, 1e-10 * dim);
    add_entry(report, "[H,C4]", check_commutes(h, casimir_matrix(gens, 2).matrix, 0).norm, 1e-8 * dim);
    add_entry(report, "[H,h]", check_commutes(h, total, 0).norm, 0.0);
    return report;
  }

  const Eigen::MatrixXd h = build_qal_chain(basis, gamma).matrix;
  const double q = q_from_gamma(gamma).q;
  const ChevalleyGenerators gens = suq_n_generators(basis, q);
  add_entry(report, "[H,h]", check_commutes(h, total, 0).norm, 0.0);
  if (n_sites == 2) {
    add_entry(report, "[H,Cq]", check_commutes(h, suq2_casimir(gens).matrix, 0).norm, 1e-10 * dim);
  } else {
    // no q-Casimir beyond rank 1; the embedded generators must still satisfy
    // the deformed Chevalley and Serre relations
    const ResidualReport chevalley = verify_chevalley(gens);
    add_entry(report, "q-Chevalley", chevalley.max_residual(), chevalley.tolerance);
    const ResidualReport serre = verify_serre(gens);
    add_entry(report, "q-Serre", serre.max_residual(), 1e-12 * dim);
  }
  return report;
}

TruncatedSpace truncated_chain(Model model, int n_sites, int n_max, double gamma, double epsilon) {
  if (n_sites < 2 || n_max < 1) {
    throw std::invalid_argument("truncated_chain: need n_sites >= 2 and n_max >= 1");
  }
  TruncatedSpace space;
  space.n_sites = n_sites;
  space.n_max = n_max;
  const Eigen::MatrixXd a = site_lowering(n_max, model, gamma);
  const Eigen::MatrixXd n_op = Eigen::VectorXd::LinSpaced(n_max + 1, 0, n_max).asDiagonal();

  std::vector<Eigen::MatrixXd> low, num;
  for (int s = 0; s < n_sites; ++s) {
    low.push_back(embed(a, s, n_sites));
    num.push_back(embed(n_op, s, n_sites));
  }
  const Eigen::Index dim = low[0].rows();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const double hop = model == Model::kQdnls ? epsilon : 1.0;
  for (int s = 0; s + 1 < n_sites; ++s) {
    const Eigen::MatrixXd term = low[s].transpose() * low[s + 1];
    h -= hop * (term + term.transpose());
  }
  for (int s = 0; s < n_sites; ++s) {
    h += model == Model::kQdnls ? Eigen::MatrixXd(-0.5 * gamma * num[s] * num[s])
                                : Eigen::MatrixXd(2.0 * num[s]);
  }
  space.hamiltonian = h;

  for (Eigen::Index x = 0; x < dim; ++x) {
    Occupation occ(static_cast<std::size_t>(n_sites));
    Eigen::Index rest = x;
    for (int s = n_sites - 1; s >= 0; --s) {
      occ[s] = static_cast<int>(rest % (n_max + 1));
      rest /= n_max + 1;
    }
    space.states.push_back(occ);
  }
  return space;
}

LeakageReport sector_leakage(Model model, int n_sites, int n_max, double gamma, double epsilon) {
  const TruncatedSpace space = truncated_chain(model, n_sites, n_max, gamma, epsilon);
  auto total = [](const Occupation& occ) {
    int t = 0;
    for (int n : occ) t += n;
    return t;
  };
  LeakageReport report;
  const auto dim = static_cast<Eigen::Index>(space.states.size());
  for (Eigen::Index x = 0; x < dim; ++x)
    for (Eigen::Index y = 0; y < dim; ++y)
      if (total(space.states[x]) != total(space.states[y]))
        report.cross_sector = std::max(report.cross_sector, std::abs(space.hamiltonian(x, y)));

  // sectors with M <= n_max fit inside the truncation without loss
  for (int m = 0; m <= n_max; ++m) {
    const BasisPtr basis = build_sector_basis(n_sites, m);
    const Eigen::MatrixXd sector = model == Model::kQdnls
                                       ? build_qdnls_chain(basis, gamma, epsilon).matrix
                                       : build_qal_chain(basis, gamma).matrix;
    std::vector<Eigen::Index> where;
    for (const Occupation& occ : basis->states()) {
      const auto it = std::find(space.states.begin(), space.states.end(), occ);
      where.push_back(it - space.states.begin());
    }
    for (std::size_t r = 0; r < where.size(); ++r)
      for (std::size_t c = 0; c < where.size(); ++c)
        report.sector_mismatch = std::max(
            report.sector_mismatch,
            std::abs(space.hamiltonian(where[r], where[c]) -
                     sector(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
  }
  return report;
}

std::vector<double> chain_energies_from_dimer(Model model, int total_quanta, double gamma,
                                              double epsilon, double tol) {
  const TridiagonalHamiltonian h = model == Model::kQdnls
                                       ? build_qdnls_dimer(total_quanta, 2.0 * gamma, epsilon)
                                       : build_qal_dimer(total_quanta, gamma);
  std::vector<double> out = eigenvalues_bisection(h, tol);
  for (double& x : out) x = h.dropped.scale * x + h.dropped.shift;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> sector_spectrum(const SectorOperator& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("sector_spectrum: eigensolver did not converge");
  }
  return {solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size()};
}

}  // namespace qdimer
