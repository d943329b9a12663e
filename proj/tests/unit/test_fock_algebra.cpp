#include "qdimer/fock_algebra.hpp"
#include "qdimer/qnumbers.hpp"

#include "brute_fock.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <set>

using namespace qdimer;

namespace {

Eigen::MatrixXd product_hop(const brute::Space& sp, int i, int j, const std::function<double(int)>& w) {
  const Eigen::MatrixXd a = brute::lowering(sp.n_max, w);
  return sp.on_site(a.transpose(), i) * sp.on_site(a, j);
}

double canonical(int n) { return n; }

}  // namespace

TEST(SectorBasis, Examples) {
  const BasisPtr b22 = build_sector_basis(2, 2);
  ASSERT_EQ(b22->dim(), 3u);
  EXPECT_EQ(b22->state(0), (Occupation{2, 0}));
  EXPECT_EQ(b22->state(1), (Occupation{1, 1}));
  EXPECT_EQ(b22->state(2), (Occupation{0, 2}));
  EXPECT_EQ(build_sector_basis(3, 2)->dim(), 6u);
  EXPECT_EQ(build_sector_basis(1, 5)->dim(), 1u);
  EXPECT_EQ(b22->index_of(Occupation{1, 1}), 1u);
  EXPECT_EQ(b22->index_of(Occupation{3, 0}), b22->dim());
}

TEST(SectorBasis, EnumerationIsCompleteAndOrdered) {
  for (int n = 1; n <= 4; ++n) {
    for (int m = 0; m <= 6; ++m) {
      const BasisPtr b = build_sector_basis(n, m);
      std::set<Occupation> seen;
      for (std::size_t k = 0; k < b->dim(); ++k) {
        int total = 0;
        for (int x : b->state(k)) total += x;
        EXPECT_EQ(total, m);
        seen.insert(b->state(k));
        if (k > 0) EXPECT_TRUE(b->state(k - 1) > b->state(k));
        EXPECT_EQ(b->index_of(b->state(k)), k);
      }
      EXPECT_EQ(seen.size(), b->dim());
      EXPECT_EQ(sector_dimension(n, m), b->dim());
    }
  }
}

TEST(SectorBasis, Errors) {
  EXPECT_THROW(build_sector_basis(0, 2), std::invalid_argument);
  EXPECT_THROW(build_sector_basis(2, -1), std::invalid_argument);
  EXPECT_THROW(build_sector_basis(30, 30), std::length_error);
  EXPECT_EQ(sector_dimension(200, 200), std::numeric_limits<std::size_t>::max());
}

TEST(HopOperator, Examples) {
  const BasisPtr b21 = build_sector_basis(2, 1);
  const Eigen::MatrixXd h = hop_operator(b21, 0, 1).matrix;
  EXPECT_EQ(h(b21->index_of({1, 0}), b21->index_of({0, 1})), 1.0);

  const BasisPtr b22 = build_sector_basis(2, 2);
  EXPECT_NEAR(hop_operator(b22, 0, 1).matrix(0, 1), std::sqrt(2.0), 1e-15);

  const BasisPtr b23 = build_sector_basis(2, 3);
  const Eigen::MatrixXd e = hop_operator(b23, 0, 1).matrix;
  const Eigen::MatrixXd f = hop_operator(b23, 1, 0).matrix;
  EXPECT_LE(max_norm(commutator(e, f) - (b23->number_operator(0) - b23->number_operator(1))), 1e-15);
  EXPECT_EQ(max_norm(e.transpose() - f), 0.0);
}

TEST(HopOperator, MatchesProductSpace) {
  for (int n = 2; n <= 3; ++n) {
    for (int m = 0; m <= 4; ++m) {
      const BasisPtr b = build_sector_basis(n, m);
      const brute::Space sp{n, m};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          EXPECT_LT(max_norm(hop_operator(b, i, j).matrix - sp.restrict(product_hop(sp, i, j, canonical), *b)),
                    1e-14);
          const double q = 0.7;
          const auto qw = [q](int k) { return sym_qnum(k, q); };
          EXPECT_LT(max_norm(q_hop_operator(b, i, j, q).matrix - sp.restrict(product_hop(sp, i, j, qw), *b)),
                    1e-14);
        }
    }
  }
}

TEST(HopOperator, Errors) {
  const BasisPtr b = build_sector_basis(3, 2);
  EXPECT_THROW(hop_operator(b, 0, 3), std::out_of_range);
  EXPECT_THROW(hop_operator(b, -1, 0), std::out_of_range);
  EXPECT_THROW(hop_operator(b, 1, 1), std::invalid_argument);
  EXPECT_THROW(q_hop_operator(b, 0, 1, 0.0), std::domain_error);
}

TEST(QHopOperator, Examples) {
  const BasisPtr b22 = build_sector_basis(2, 2);
  EXPECT_EQ(max_norm(q_hop_operator(b22, 0, 1, 1.0).matrix - hop_operator(b22, 0, 1).matrix), 0.0);
  const double q = 0.5;
  EXPECT_NEAR(q_hop_operator(b22, 0, 1, q).matrix(0, 1), std::sqrt(sym_qnum(2, q)), 1e-15);

  const BasisPtr b23 = build_sector_basis(2, 3);
  const double qq = 1.0 / std::sqrt(2.0);
  const ChevalleyGenerators g = suq_n_generators(b23, qq);
  const Eigen::MatrixXd two_h = diagonal_function(g.h[0], [qq](double x) { return sym_qnum(2 * x, qq); });
  EXPECT_LE(max_norm(commutator(g.e[0], g.f[0]) - two_h), 1e-12);
}

TEST(CartanMatrix, Examples) {
  EXPECT_EQ(cartan_matrix(2)(0, 0), 2);
  Eigen::MatrixXi expect(2, 2);
  expect << 2, -1, -1, 2;
  EXPECT_EQ(cartan_matrix(3), expect);
  const Eigen::VectorXi sums = cartan_matrix(4).rowwise().sum();
  EXPECT_EQ(sums, (Eigen::VectorXi(3) << 1, 0, 1).finished());
}

TEST(Chevalley, ClassicalAndDeformed) {
  const ResidualReport su2 = verify_chevalley(su_n_generators(build_sector_basis(2, 2)));
  EXPECT_TRUE(su2.passed());
  EXPECT_LE(su2.max_residual(), 1e-13);

  const BasisPtr b32 = build_sector_basis(3, 2);
  const ResidualReport classical = verify_chevalley(su_n_generators(b32));
  const ResidualReport at_one = verify_chevalley(suq_n_generators(b32, 1.0));
  EXPECT_TRUE(at_one.passed());
  EXPECT_LE(std::abs(classical.max_residual() - at_one.max_residual()), 1e-14);

  const ResidualReport q_half = verify_chevalley(suq_n_generators(build_sector_basis(2, 4), 0.5));
  EXPECT_TRUE(q_half.passed());
  EXPECT_LE(q_half.max_residual(), 1e-12);
}

TEST(Chevalley, DetectsBrokenGenerators) {
  ChevalleyGenerators g = su_n_generators(build_sector_basis(3, 3));
  g.e[1](0, 1) += 1e-3;
  EXPECT_FALSE(verify_chevalley(g).passed());
}

TEST(Serre, ClassicalAndDeformed) {
  EXPECT_LE(verify_serre(su_n_generators(build_sector_basis(3, 3))).max_residual(), 1e-12);
  const BasisPtr b32 = build_sector_basis(3, 2);
  EXPECT_LE(std::abs(verify_serre(suq_n_generators(b32, 1.0)).max_residual() -
                     verify_serre(su_n_generators(b32)).max_residual()),
            1e-14);
  EXPECT_LE(verify_serre(suq_n_generators(b32, 1.0 / std::sqrt(2.0))).max_residual(), 1e-12);
  const ResidualReport rank1 = verify_serre(su_n_generators(build_sector_basis(2, 3)));
  EXPECT_TRUE(rank1.vacuous);
  EXPECT_TRUE(rank1.residuals.empty());
}

TEST(Serre, QuadraticSumIsNotZeroButCubicIs) {
  // the q-Serre sum only vanishes at order 1 - alpha_ij = 2; order 1 would be
  // a plain commutator, which is nonzero
  const ChevalleyGenerators g = suq_n_generators(build_sector_basis(3, 3), 0.6);
  EXPECT_GT(max_norm(commutator(g.e[0], g.e[1])), 0.1);
  EXPECT_LE(verify_serre(g).max_residual(), 1e-12);
}

TEST(AlOscillator, Examples) {
  const AlOscillator classical = al_oscillator_ops(6, 0.0);
  const brute::Space one{1, 6};
  EXPECT_EQ(max_norm(classical.b - brute::lowering(6, canonical)), 0.0);

  const AlOscillator osc = al_oscillator_ops(8, 2.0);
  const Eigen::VectorXd bdb = (osc.b_dag * osc.b).diagonal();
  for (int n = 0; n <= 8; ++n) EXPECT_NEAR(bdb[n], std::pow(2.0, n) - 1.0, 1e-12 * std::pow(2.0, n));
  EXPECT_EQ(osc.b.col(0).norm(), 0.0);

  for (auto [g, n] : {std::pair{0.0, 10}, std::pair{2.0, 20}, std::pair{8.0, 15}}) {
    const ResidualReport r = verify_al_relations(al_oscillator_ops(n, g));
    EXPECT_TRUE(r.passed()) << g;
    EXPECT_LE(r.max_residual(), 1e-10);
  }
  EXPECT_THROW(al_oscillator_ops(0, 1.0), std::invalid_argument);
  EXPECT_THROW(al_oscillator_ops(3, -1.0), std::domain_error);
}

TEST(AlOscillator, TruncationRowIsExcluded) {
  // on the full truncated matrix the commutator fails in the top row
  const AlOscillator osc = al_oscillator_ops(5, 2.0);
  const Eigen::MatrixXd lhs = osc.b * osc.b_dag - osc.b_dag * osc.b;
  const Eigen::MatrixXd rhs = Eigen::MatrixXd::Identity(6, 6) + osc.b_dag * osc.b;
  EXPECT_GT(std::abs(lhs(5, 5) - rhs(5, 5)), 1.0);
  EXPECT_TRUE(verify_al_relations(osc).passed());
}

TEST(GeneratorMatrix, RecursionMatchesDirectHops) {
  // E_ab = a_a^dag a_b off the diagonal, independent of the split point
  for (int n = 2; n <= 4; ++n) {
    const BasisPtr b = build_sector_basis(n, 3);
    const ChevalleyGenerators g = su_n_generators(b);
    const GeneratorMatrix first = generator_matrix(g, ChainSplit::kFirst);
    const GeneratorMatrix last = generator_matrix(g, ChainSplit::kLast);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        EXPECT_LE(max_norm(first(x, y) - last(x, y)), 1e-14);
        if (x != y) EXPECT_LE(max_norm(first(x, y) - hop_operator(b, x, y).matrix), 1e-14);
      }
  }
}

TEST(Casimir, Su2Examples) {
  const BasisPtr b22 = build_sector_basis(2, 2);
  const ChevalleyGenerators g = su_n_generators(b22);
  const Eigen::MatrixXd c = su2_casimir(g).matrix;
  EXPECT_LE(max_norm(c - 2.0 * Eigen::MatrixXd::Identity(3, 3)), 1e-14);
  // the trace form is the full gl(2) Casimir, 2 j (j + 1)
  EXPECT_LE(max_norm(casimir_matrix(g, 1).matrix - 4.0 * Eigen::MatrixXd::Identity(3, 3)), 1e-13);
}

TEST(Casimir, QuadraticClosedForm) {
  // tr(E^2) = M (n - 1) (M + n) / n on the symmetric M-quanta sector
  for (int n = 2; n <= 4; ++n)
    for (int m = 0; m <= 4; ++m) {
      const BasisPtr b = build_sector_basis(n, m);
      const double expect = static_cast<double>(m) * (n - 1) * (m + n) / n;
      const Eigen::MatrixXd c = casimir_matrix(su_n_generators(b), 1).matrix;
      EXPECT_LE(max_norm(c - expect * Eigen::MatrixXd::Identity(c.rows(), c.cols())), 1e-12) << n << " " << m;
    }
}

TEST(Casimir, CentralInSu3) {
  const ChevalleyGenerators g = su_n_generators(build_sector_basis(3, 2));
  for (int p = 1; p <= 2; ++p) {
    const Eigen::MatrixXd c = casimir_matrix(g, p).matrix;
    for (int i = 0; i < g.rank(); ++i) {
      EXPECT_LE(max_norm(commutator(c, g.e[i])), 1e-12);
      EXPECT_LE(max_norm(commutator(c, g.f[i])), 1e-12);
      EXPECT_LE(max_norm(commutator(c, g.h[i])), 1e-12);
    }
  }
}

TEST(Casimir, RejectsDeformedAndBadPower) {
  const BasisPtr b = build_sector_basis(3, 2);
  EXPECT_THROW(casimir_matrix(suq_n_generators(b, 0.5), 1), std::invalid_argument);
  EXPECT_THROW(casimir_matrix(su_n_generators(b), 0), std::invalid_argument);
  EXPECT_NO_THROW(casimir_matrix(suq_n_generators(b, 1.0), 1));
}

TEST(QCasimir, Examples) {
  const BasisPtr b23 = build_sector_basis(2, 3);
  EXPECT_LE(max_norm(suq2_casimir(suq_n_generators(b23, 1.0)).matrix - su2_casimir(su_n_generators(b23)).matrix),
            1e-14);

  const double q = 1.0 / std::sqrt(2.0);
  const Eigen::MatrixXd c = suq2_casimir(suq_n_generators(build_sector_basis(2, 2), q)).matrix;
  EXPECT_LE(max_norm(c - 3.0 / std::sqrt(2.0) * Eigen::MatrixXd::Identity(3, 3)), 1e-14);

  const ChevalleyGenerators g = suq_n_generators(b23, 0.6);
  const Eigen::MatrixXd cq = suq2_casimir(g).matrix;
  EXPECT_LE(max_norm(commutator(cq, g.e[0])), 1e-12);
  EXPECT_LE(max_norm(commutator(cq, g.f[0])), 1e-12);
  EXPECT_LE(max_norm(commutator(cq, g.k[0])), 1e-12);
}

TEST(Omega, TwoSiteInverse) {
  const Eigen::MatrixXd omega = omega_matrix(2);
  Eigen::MatrixXd expect(2, 2);
  expect << 1, -1, 1, 1;
  EXPECT_EQ(omega, expect);
  Eigen::MatrixXd inv(2, 2);
  inv << 0.5, 0.5, -0.5, 0.5;
  EXPECT_LE(max_norm(omega.inverse() - inv), 1e-15);
  EXPECT_THROW(omega_matrix(1), std::invalid_argument);
}

TEST(Omega, NumberReconstruction) {
  EXPECT_EQ(verify_number_reconstruction(build_sector_basis(2, 3)).max_residual(), 0.0);
  for (int n = 2; n <= 5; ++n)
    for (int m = 0; m <= 3; ++m) EXPECT_TRUE(verify_number_reconstruction(build_sector_basis(n, m)).passed());
  EXPECT_LE(verify_number_reconstruction(build_sector_basis(3, 2)).max_residual(), 1e-12);
}

TEST(DiagonalFunction, RejectsOffDiagonalInput) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(diagonal_function(m, [](double x) { return x; }), std::invalid_argument);
}

TEST(ResidualReport, NaNFails) {
  ResidualReport r;
  r.tolerance = 1.0;
  r.residuals.push_back({"x", std::nan("")});
  EXPECT_FALSE(r.passed());
}
