// Dense reference construction: one-site ladder matrices, Kronecker products
// over the truncated product space, then the rows/columns of one sector.
#pragma once

#include "qdimer/fock_algebra.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

namespace brute {

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  Eigen::MatrixXd out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c) out.block(r * y.rows(), c * y.cols(), y.rows(), y.cols()) = x(r, c) * y;
  return out;
}

// Lowering operator with a|n> = sqrt(w(n)) |n-1>.
inline Eigen::MatrixXd lowering(int n_max, const std::function<double(int)>& w) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(w(n));
  return a;
}

struct Space {
  int sites;
  int n_max;

  Eigen::Index dim() const {
    Eigen::Index d = 1;
    for (int s = 0; s < sites; ++s) d *= n_max + 1;
    return d;
  }

  Eigen::MatrixXd on_site(const Eigen::MatrixXd& op, int site) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
    for (int s = 0; s < sites; ++s)
      out = kron(out, s == site ? op : Eigen::MatrixXd::Identity(n_max + 1, n_max + 1));
    return out;
  }

  // product-space index of an occupation tuple (site 0 slowest)
  Eigen::Index index(const qdimer::Occupation& occ) const {
    Eigen::Index x = 0;
    for (int s = 0; s < sites; ++s) x = x * (n_max + 1) + occ[s];
    return x;
  }

  Eigen::MatrixXd restrict(const Eigen::MatrixXd& full, const qdimer::FockSectorBasis& basis) const {
    const auto d = static_cast<Eigen::Index>(basis.dim());
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) out(r, c) = full(index(basis.state(r)), index(basis.state(c)));
    return out;
  }
};

}  // namespace brute
