#include "qdimer/fock_algebra.hpp"

#include "qdimer/qnumbers.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace qdimer {

namespace {

void enumerate_states(int site, int remaining, Occupation& current, std::vector<Occupation>& out) {
  const int last = static_cast<int>(current.size()) - 1;
  if (site == last) {
    current[site] = remaining;
    out.push_back(current);
    return;
  }
  for (int n = remaining; n >= 0; --n) {
    current[site] = n;
    enumerate_states(site + 1, remaining - n, current, out);
  }
}

void check_site(const FockSectorBasis& basis, int i, const char* who) {
  if (i < 0 || i >= basis.n_sites()) {
    throw std::out_of_range(std::string(who) + ": site index " + std::to_string(i) +
                            " outside 0.." + std::to_string(basis.n_sites() - 1));
  }
}

template <typename Amplitude>
SectorOperator hop_impl(const BasisPtr& basis, int i, int j, Amplitude&& amplitude,
                        const char* who) {
  check_site(*basis, i, who);
  check_site(*basis, j, who);
  if (i == j) {
    throw std::invalid_argument(std::string(who) + ": need i != j");
  }
  const auto dim = static_cast<Eigen::Index>(basis->dim());
  SectorOperator op{basis, Eigen::MatrixXd::Zero(dim, dim)};
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Occupation& in = basis->state(col);
    if (in[j] == 0) continue;
    Occupation out = in;
    out[i] += 1;
    out[j] -= 1;
    const auto row = static_cast<Eigen::Index>(basis->index_of(out));
    op.matrix(row, col) = amplitude(in[i] + 1, in[j]);
  }
  return op;
}

Eigen::MatrixXd identity_like(const BasisPtr& basis) {
  const auto dim = static_cast<Eigen::Index>(basis->dim());
  return Eigen::MatrixXd::Identity(dim, dim);
}

double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

}  // namespace

FockSectorBasis::FockSectorBasis(int n_sites, int total_quanta)
    : n_sites_(n_sites), total_quanta_(total_quanta) {
  if (n_sites < 1) {
    throw std::invalid_argument("FockSectorBasis: n_sites must be >= 1");
  }
  if (total_quanta < 0) {
    throw std::invalid_argument("FockSectorBasis: total quanta must be >= 0");
  }
  const std::size_t dim = sector_dimension(n_sites, total_quanta);
  if (dim > kMaxSectorDim) {
    throw std::length_error("FockSectorBasis: sector dimension " + std::to_string(dim) +
                            " exceeds " + std::to_string(kMaxSectorDim));
  }
  states_.reserve(dim);
  Occupation current(n_sites, 0);
  enumerate_states(0, total_quanta, current, states_);
  for (std::size_t k = 0; k < states_.size(); ++k) {
    lookup_.emplace(states_[k], k);
  }
}

std::size_t FockSectorBasis::index_of(const Occupation& occ) const {
  const auto it = lookup_.find(occ);
  return it == lookup_.end() ? dim() : it->second;
}

Eigen::MatrixXd FockSectorBasis::number_operator(int site) const {
  check_site(*this, site, "number_operator");
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out(k, k) = states_[k][site];
  }
  return out;
}

std::size_t sector_dimension(int n_sites, int total_quanta) {
  if (n_sites < 1 || total_quanta < 0) return 0;
  // C(M + n - 1, n - 1) built as a running product of exact binomials
  const auto cap = std::numeric_limits<std::size_t>::max();
  unsigned __int128 value = 1;
  for (int i = 1; i < n_sites; ++i) {
    value = value * static_cast<unsigned>(total_quanta + i) / static_cast<unsigned>(i);
    if (value > cap) return cap;
  }
  return static_cast<std::size_t>(value);
}

BasisPtr build_sector_basis(int n_sites, int total_quanta) {
  return std::make_shared<const FockSectorBasis>(n_sites, total_quanta);
}

SectorOperator hop_operator(const BasisPtr& basis, int i, int j) {
  return hop_impl(
      basis, i, j, [](int up, int down) { return std::sqrt(static_cast<double>(up) * down); },
      "hop_operator");
}

SectorOperator q_hop_operator(const BasisPtr& basis, int i, int j, double q) {
  if (!(q > 0.0)) {
    throw std::domain_error("q_hop_operator: q must be positive");
  }
  return hop_impl(
      basis, i, j,
      [q](int up, int down) { return std::sqrt(sym_qnum(up, q) * sym_qnum(down, q)); },
      "q_hop_operator");
}

ChevalleyGenerators su_n_generators(const BasisPtr& basis) {
  if (basis->n_sites() < 2) {
    throw std::invalid_argument("su_n_generators: need at least two sites");
  }
  ChevalleyGenerators gens;
  gens.basis = basis;
  for (int i = 0; i + 1 < basis->n_sites(); ++i) {
    gens.e.push_back(hop_operator(basis, i, i + 1).matrix);
    gens.f.push_back(hop_operator(basis, i + 1, i).matrix);
    gens.h.push_back(0.5 * (basis->number_operator(i) - basis->number_operator(i + 1)));
  }
  return gens;
}

ChevalleyGenerators suq_n_generators(const BasisPtr& basis, double q) {
  if (basis->n_sites() < 2) {
    throw std::invalid_argument("suq_n_generators: need at least two sites");
  }
  if (!(q > 0.0)) {
    throw std::domain_error("suq_n_generators: q must be positive");
  }
  ChevalleyGenerators gens;
  gens.basis = basis;
  gens.q = q;
  gens.deformed = true;
  for (int i = 0; i + 1 < basis->n_sites(); ++i) {
    gens.e.push_back(q_hop_operator(basis, i, i + 1, q).matrix);
    gens.f.push_back(q_hop_operator(basis, i + 1, i, q).matrix);
    const Eigen::MatrixXd ni = basis->number_operator(i);
    const Eigen::MatrixXd nj = basis->number_operator(i + 1);
    gens.h.push_back(0.5 * (ni - nj));
    gens.k.push_back(diagonal_function(gens.h.back(), [q](double x) { return std::pow(q, x); }));
    gens.c.push_back(
        diagonal_function(0.5 * (ni + nj), [q](double x) { return std::pow(q, x); }));
  }
  return gens;
}

Eigen::MatrixXi cartan_matrix(int n) {
  if (n < 2) {
    throw std::invalid_argument("cartan_matrix: need n >= 2");
  }
  const int r = n - 1;
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(r, r);
  for (int i = 0; i < r; ++i) {
    a(i, i) = 2;
    if (i + 1 < r) {
      a(i, i + 1) = -1;
      a(i + 1, i) = -1;
    }
  }
  return a;
}

double ResidualReport::max_residual() const {
  double worst = 0.0;
  for (const auto& r : residuals) {
    // NaN must fail the comparison against the tolerance
    if (!(r.norm <= worst)) worst = r.norm;
  }
  return worst;
}

double max_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

ResidualReport verify_chevalley(const ChevalleyGenerators& gens) {
  ResidualReport report;
  const int r = gens.rank();
  const double dim = static_cast<double>(gens.basis->dim());
  report.tolerance = 1e-12 * dim;
  const Eigen::MatrixXi alpha = cartan_matrix(r + 1);
  const double q = gens.q;

  auto add = [&](std::string label, const Eigen::MatrixXd& m) {
    report.residuals.push_back({std::move(label), max_norm(m)});
  };
  auto pair = [](const char* rel, int i, int j) {
    return std::string(rel) + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  };

  for (int i = 0; i < r; ++i) {
    add(pair("f-e^T", i, i), gens.f[i] - gens.e[i].transpose());
    for (int j = 0; j < r; ++j) {
      const double a = alpha(i, j);
      add(pair("[h,h]", i, j), commutator(gens.h[i], gens.h[j]));
      add(pair("[h,e]-a/2 e", i, j), commutator(gens.h[i], gens.e[j]) - 0.5 * a * gens.e[j]);
      add(pair("[h,f]+a/2 f", i, j), commutator(gens.h[i], gens.f[j]) + 0.5 * a * gens.f[j]);
      if (!gens.deformed) {
        add(pair("[e,f]-2h", i, j),
            commutator(gens.e[i], gens.f[j]) - 2.0 * delta(i, j) * gens.h[i]);
        continue;
      }
      const Eigen::MatrixXd k_inv =
          diagonal_function(gens.k[i], [](double x) { return 1.0 / x; });
      add(pair("[k,k]", i, j), commutator(gens.k[i], gens.k[j]));
      add(pair("k e k^-1-q^(a/2) e", i, j),
          gens.k[i] * gens.e[j] * k_inv - std::pow(q, 0.5 * a) * gens.e[j]);
      add(pair("k f k^-1-q^(-a/2) f", i, j),
          gens.k[i] * gens.f[j] * k_inv - std::pow(q, -0.5 * a) * gens.f[j]);
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(gens.e[i].rows(), gens.e[i].cols());
      if (i == j) {
        rhs = diagonal_function(gens.h[i], [q](double x) { return sym_qnum(2.0 * x, q); });
      }
      add(pair("[e,f]-[2h]", i, j), commutator(gens.e[i], gens.f[j]) - rhs);
    }
    if (gens.deformed) {
      const Eigen::MatrixXd k_inv =
          diagonal_function(gens.k[i], [](double x) { return 1.0 / x; });
      add(pair("k k^-1-1", i, i), gens.k[i] * k_inv - identity_like(gens.basis));
      add(pair("[C,e]", i, i), commutator(gens.c[i], gens.e[i]));
      add(pair("[C,f]", i, i), commutator(gens.c[i], gens.f[i]));
      add(pair("[C,k]", i, i), commutator(gens.c[i], gens.k[i]));
    }
  }
  return report;
}

ResidualReport verify_serre(const ChevalleyGenerators& gens) {
  ResidualReport report;
  const int r = gens.rank();
  report.tolerance = 1e-12 * static_cast<double>(gens.basis->dim());
  if (r < 2) {
    report.vacuous = true;
    return report;
  }
  const Eigen::MatrixXi alpha = cartan_matrix(r + 1);
  const double q = gens.deformed ? gens.q : 1.0;
  const Eigen::MatrixXd id = identity_like(gens.basis);

  auto serre_sum = [&](const std::vector<Eigen::MatrixXd>& x, int i, int j) {
    const int order = 1 - alpha(i, j);
    std::vector<Eigen::MatrixXd> powers{id};
    for (int p = 1; p <= order; ++p) powers.push_back(powers.back() * x[i]);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(id.rows(), id.cols());
    for (int rr = 0; rr <= order; ++rr) {
      const double sign = (rr % 2 == 0) ? 1.0 : -1.0;
      sum += sign * q_binomial(order, rr, q) * powers[rr] * x[j] * powers[order - rr];
    }
    return sum;
  };

  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      if (i == j) continue;
      const std::string idx = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      report.residuals.push_back({"serre-e" + idx, max_norm(serre_sum(gens.e, i, j))});
      report.residuals.push_back({"serre-f" + idx, max_norm(serre_sum(gens.f, i, j))});
    }
  }
  return report;
}

AlOscillator al_oscillator_ops(int n_max, double gamma) {
  if (n_max < 1) {
    throw std::invalid_argument("al_oscillator_ops: n_max must be >= 1");
  }
  if (!(gamma >= 0.0)) {
    throw std::domain_error("al_oscillator_ops: gamma must be >= 0");
  }
  const Eigen::Index dim = n_max + 1;
  AlOscillator osc;
  osc.n_max = n_max;
  osc.gamma = gamma;
  osc.b = Eigen::MatrixXd::Zero(dim, dim);
  osc.number = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n <= n_max; ++n) {
    osc.number(n, n) = n;
    if (n > 0) osc.b(n - 1, n) = std::sqrt(basic_qnum(n, gamma));
  }
  osc.b_dag = osc.b.transpose();
  return osc;
}

ResidualReport verify_al_relations(const AlOscillator& osc) {
  ResidualReport report;
  report.tolerance = 1e-10;
  const Eigen::Index safe = osc.n_max;  // rows/cols n < n_max
  const double g = 0.5 * osc.gamma;
  const Eigen::Index dim = osc.b.rows();

  const Eigen::MatrixXd bdb = osc.b_dag * osc.b;
  const Eigen::MatrixXd lhs = osc.b * osc.b_dag - bdb;
  const Eigen::MatrixXd rhs = Eigen::MatrixXd::Identity(dim, dim) + g * bdb;
  const double ccr_scale = std::max(1.0, max_norm(rhs.topLeftCorner(safe, safe)));
  report.residuals.push_back(
      {"[b,b^dag]-(1+g b^dag b)", max_norm((lhs - rhs).topLeftCorner(safe, safe)) / ccr_scale});

  const Eigen::MatrixXd from_log = diagonal_function(bdb, [&](double x) {
    return osc.gamma == 0.0 ? x : std::log1p(g * x) / std::log1p(g);
  });
  const double n_scale = std::max(1.0, max_norm(osc.number.topLeftCorner(safe, safe)));
  report.residuals.push_back(
      {"N-ln(1+g b^dag b)/ln(1+g)",
       max_norm((osc.number - from_log).topLeftCorner(safe, safe)) / n_scale});
  return report;
}

GeneratorMatrix generator_matrix(const ChevalleyGenerators& gens, ChainSplit split) {
  const BasisPtr& basis = gens.basis;
  const int n = basis->n_sites();
  GeneratorMatrix m;
  m.n = n;
  const auto dim = static_cast<Eigen::Index>(basis->dim());
  m.entries.assign(static_cast<std::size_t>(n * n), Eigen::MatrixXd::Zero(dim, dim));
  auto at = [&](int a, int b) -> Eigen::MatrixXd& { return m.entries[a * n + b]; };

  for (int width = 1; width < n; ++width) {
    for (int a = 0; a + width < n; ++a) {
      const int b = a + width;
      if (width == 1) {
        at(a, b) = gens.e[a];
      } else {
        const int c = split == ChainSplit::kFirst ? a + 1 : b - 1;
        at(a, b) = commutator(at(a, c), at(c, b));
      }
      at(b, a) = at(a, b).transpose();
    }
  }
  const double mean = static_cast<double>(basis->total_quanta()) / n;
  for (int a = 0; a < n; ++a) {
    at(a, a) = basis->number_operator(a) - mean * identity_like(basis);
  }
  return m;
}

SectorOperator casimir_matrix(const ChevalleyGenerators& gens, int p) {
  if (gens.deformed && std::abs(gens.q - 1.0) >= kClassicalThreshold) {
    throw std::invalid_argument("casimir_matrix: deformed generators are not supported");
  }
  if (p < 1) {
    throw std::invalid_argument("casimir_matrix: p must be >= 1");
  }
  const GeneratorMatrix e = generator_matrix(gens);
  const int n = e.n;
  const auto dim = static_cast<Eigen::Index>(gens.basis->dim());
  auto index = [n](int a, int b) { return static_cast<std::size_t>(a * n + b); };

  // F_cb = (E_bc)^dagger
  std::vector<Eigen::MatrixXd> f(e.entries.size());
  for (int c = 0; c < n; ++c)
    for (int b = 0; b < n; ++b) f[index(c, b)] = e(b, c).transpose();

  std::vector<Eigen::MatrixXd> m(e.entries.size(), Eigen::MatrixXd::Zero(dim, dim));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) m[index(a, b)] += e(a, c) * f[index(c, b)];

  std::vector<Eigen::MatrixXd> power = m;
  for (int step = 1; step < p; ++step) {
    std::vector<Eigen::MatrixXd> next(m.size(), Eigen::MatrixXd::Zero(dim, dim));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) next[index(a, b)] += power[index(a, c)] * m[index(c, b)];
    power = std::move(next);
  }

  SectorOperator out{gens.basis, Eigen::MatrixXd::Zero(dim, dim)};
  for (int a = 0; a < n; ++a) out.matrix += power[index(a, a)];
  return out;
}

SectorOperator su2_casimir(const ChevalleyGenerators& gens) {
  if (gens.rank() != 1) {
    throw std::invalid_argument("su2_casimir: need rank-1 generators");
  }
  const Eigen::MatrixXd& j0 = gens.h[0];
  const Eigen::MatrixXd id = identity_like(gens.basis);
  return {gens.basis, j0 * (j0 - id) + gens.e[0] * gens.f[0]};
}

SectorOperator suq2_casimir(const ChevalleyGenerators& gens) {
  if (gens.rank() != 1) {
    throw std::invalid_argument("suq2_casimir: need rank-1 generators");
  }
  const double q = gens.q;
  const Eigen::MatrixXd diag = diagonal_function(
      gens.h[0], [q](double x) { return sym_qnum(x, q) * sym_qnum(x - 1.0, q); });
  return {gens.basis, diag + gens.e[0] * gens.f[0]};
}

Eigen::MatrixXd omega_matrix(int n) {
  if (n < 2) {
    throw std::invalid_argument("omega_matrix: need n >= 2");
  }
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    omega(i, i) = 1.0;
    omega(i, i + 1) = -1.0;
  }
  omega.row(n - 1).setOnes();
  return omega;
}

ResidualReport verify_number_reconstruction(const BasisPtr& basis) {
  const int n = basis->n_sites();
  const Eigen::MatrixXd omega = omega_matrix(n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(omega);
  if (!lu.isInvertible()) {
    throw std::logic_error("verify_number_reconstruction: Omega is singular");
  }
  const Eigen::MatrixXd inv = lu.inverse();
  const ChevalleyGenerators gens = su_n_generators(basis);
  const Eigen::MatrixXd total = basis->total_quanta() * identity_like(basis);

  ResidualReport report;
  report.tolerance = 1e-12;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd rebuilt = inv(i, n - 1) * total;
    for (int j = 0; j + 1 < n; ++j) rebuilt += inv(i, j) * 2.0 * gens.h[j];
    report.residuals.push_back(
        {"N" + std::to_string(i), max_norm(basis->number_operator(i) - rebuilt)});
  }
  return report;
}

}  // namespace qdimer
