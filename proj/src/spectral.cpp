#include "qdimer/spectral.hpp"

#include "qdimer/qnumbers.hpp"


#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace qdimer {

namespace {

constexpr double kHuge = 0x1p512;
constexpr double kTiny = 0x1p-512;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Recurrence vectors are accepted when the residual is at this level of
// max(1, ||H||) and small against the gap to the nearest neighbour.
constexpr double kAcceptResidual = 1e-12;
constexpr double kAcceptResidualOverGap = 1e-10;
// Beyond this level of max(1, ||H||) lambda is not an eigenvalue.
constexpr double kRejectResidual = 1e-8;

using Span = std::span<const double>;

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  int dim() const { return static_cast<int>(diag.size()); }
};

Tridiagonal raw(const TridiagonalHamiltonian& h) { return {h.diag, h.off}; }

double inf_norm(const Tridiagonal& t) {
  double worst = 0.0;
  const int n = t.dim();
  for (int k = 0; k < n; ++k) {
    double row = std::abs(t.diag[k]);
    if (k > 0) row += std::abs(t.off[k - 1]);
    if (k + 1 < n) row += std::abs(t.off[k]);
    worst = std::max(worst, row);
  }
  return worst;
}

double pivot_floor(const Tridiagonal& t) {
  double big = 1.0;
  for (double o : t.off) big = std::max(big, o * o);
  return std::numeric_limits<double>::min() * big;
}

// Eigenvalues strictly below lambda from the LDL^T pivots of T - lambda. A zero
// pivot counts as positive, which is the "sign opposite to the previous term"
// rule of the p-sequence.
int count_below(const Tridiagonal& t, double lambda, double pivmin) {
  int count = 0;
  double pivot = 1.0;
  for (int k = 0; k < t.dim(); ++k) {
    const double coupling = k > 0 ? t.off[k - 1] * t.off[k - 1] / pivot : 0.0;
    pivot = (t.diag[k] - lambda) - coupling;
    if (std::abs(pivot) < pivmin) pivot = pivmin;
    if (pivot < 0.0) ++count;
  }
  return count;
}

SturmEvaluation sturm_raw(const Tridiagonal& t, double lambda, double pivmin) {
  if (std::isnan(lambda)) {
    throw std::domain_error("sturm_eval: lambda is NaN");
  }
  SturmEvaluation ev;
  ev.lambda = lambda;
  double prev = 0.0;
  double cur = 1.0;
  long scale = 0;
  for (int k = 0; k < t.dim(); ++k) {
    const double back = k > 0 ? t.off[k - 1] * t.off[k - 1] * prev : 0.0;
    const double next = (lambda - t.diag[k]) * cur - back;
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(cur), std::abs(prev));
    if (mag > kHuge || (mag < kTiny && mag > 0.0)) {
      int e = 0;
      std::frexp(mag, &e);
      cur = std::ldexp(cur, -e);
      prev = std::ldexp(prev, -e);
      scale += e;
    }
  }
  ev.value = cur;
  ev.log2_scale = scale;
  ev.count_below = count_below(t, lambda, pivmin);
  return ev;
}

std::pair<double, double> gershgorin(const Tridiagonal& t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const int n = t.dim();
  for (int k = 0; k < n; ++k) {
    double radius = 0.0;
    if (k > 0) radius += std::abs(t.off[k - 1]);
    if (k + 1 < n) radius += std::abs(t.off[k]);
    lo = std::min(lo, t.diag[k] - radius);
    hi = std::max(hi, t.diag[k] + radius);
  }
  return {lo, hi};
}

std::vector<double> bisect_all(const Tridiagonal& t, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("eigenvalues_bisection: tol must be positive");
  }
  const int n = t.dim();
  auto [glo, ghi] = gershgorin(t);
  const double pad = 4.0 * kEps * std::max(1.0, inf_norm(t)) * n;
  glo -= pad;
  ghi += pad;
  const double pivmin = pivot_floor(t);

  std::vector<double> values(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double lo = k > 0 ? std::max(glo, values[k - 1] - pad) : glo;
    double hi = ghi;
    if (count_below(t, lo, pivmin) > k) lo = glo;
    double root = std::numeric_limits<double>::quiet_NaN();
    for (int iter = 0; iter < 400; ++iter) {
      const double width = hi - lo;
      if (width <= tol * std::max(1.0, std::min(std::abs(lo), std::abs(hi)))) break;
      const double mid = lo + 0.5 * width;
      if (mid <= lo || mid >= hi) break;
      const SturmEvaluation ev = sturm_raw(t, mid, pivmin);
      if (ev.count_below == k && ev.value == 0.0) {
        root = mid;
        break;
      }
      if (ev.count_below <= k) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    values[k] = std::isnan(root) ? lo + 0.5 * (hi - lo) : root;
  }
  // midpoints of overlapping brackets inside a tight cluster can swap
  std::sort(values.begin(), values.end());
  return values;
}

std::vector<double> multiply(const Tridiagonal& t, const std::vector<double>& v) {
  const int n = t.dim();
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double s = t.diag[k] * v[k];
    if (k > 0) s += t.off[k - 1] * v[k - 1];
    if (k + 1 < n) s += t.off[k] * v[k + 1];
    out[k] = s;
  }
  return out;
}

double residual_of(const Tridiagonal& t, const std::vector<double>& v, double lambda) {
  const std::vector<double> hv = multiply(t, v);
  double worst = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) worst = std::max(worst, std::abs(hv[k] - lambda * v[k]));
  return worst;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void normalize(std::vector<double>& v) {
  // scale first so the sum of squares cannot overflow
  double big = 0.0;
  for (double x : v) big = std::max(big, std::abs(x));
  if (big == 0.0) return;
  for (double& x : v) x /= big;
  const double nrm = norm2(v);
  for (double& x : v) x /= nrm;
}

void fix_sign(std::vector<double>& v) {
  for (double x : v) {
    if (x != 0.0) {
      if (x < 0.0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

// psi_k / (o_0 ... o_{k-1}) from the seed psi_{-j} = 1. Empty when a coupling
// vanishes.
std::vector<double> forward_recurrence(const Tridiagonal& t, double lambda) {
  const int n = t.dim();
  std::vector<double> c(static_cast<std::size_t>(n), 0.0);
  c[0] = 1.0;
  for (int k = 0; k + 1 < n; ++k) {
    if (t.off[k] == 0.0) return {};
    const double back = k > 0 ? t.off[k - 1] * c[k - 1] : 0.0;
    c[k + 1] = ((lambda - t.diag[k]) * c[k] - back) / t.off[k];
    if (std::abs(c[k + 1]) > kHuge) {
      for (int i = 0; i <= k + 1; ++i) c[i] *= kTiny;
    }
  }
  normalize(c);
  return c;
}

// Solves (T - shift) x = rhs by Gaussian elimination with partial pivoting.
// Zero pivots are replaced by a tiny value so that the solve never fails.
std::vector<double> shifted_solve(const Tridiagonal& t, double shift, std::vector<double> rhs) {
  const int n = t.dim();
  std::vector<double> d(t.diag), dl(t.off), du(t.off), du2(std::max(0, n - 2), 0.0);
  std::vector<bool> swapped(static_cast<std::size_t>(std::max(0, n - 1)), false);
  for (double& x : d) x -= shift;
  const double tiny = kEps * std::max(1.0, inf_norm(t));

  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double fact = dl[i] / d[i];
      dl[i] = fact;
      d[i + 1] -= fact * du[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = true;
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;

  for (int i = 0; i + 1 < n; ++i) {
    if (swapped[i]) std::swap(rhs[i], rhs[i + 1]);
    rhs[i + 1] -= dl[i] * rhs[i];
  }
  rhs[n - 1] /= d[n - 1];
  if (n > 1) rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
  for (int i = n - 3; i >= 0; --i) {
    rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
  }
  return rhs;
}

std::vector<double> start_vector(int n, unsigned salt) {
  // fixed pseudo-random start so results do not depend on call order
  std::vector<double> v(static_cast<std::size_t>(n));
  unsigned state = 2463534242u ^ (salt * 2654435761u);
  for (int k = 0; k < n; ++k) {
    state ^= state << 13;
    state ^= state >> 17;
    state ^= state << 5;
    v[k] = 0.5 + static_cast<double>(state % 1000003u) / 1000003.0;
  }
  normalize(v);
  return v;
}

void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& against) {
  for (const auto& u : against) {
    double dot = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) dot += u[k] * v[k];
    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= dot * u[k];
  }
}

std::vector<double> inverse_iteration(const Tridiagonal& t, double lambda, unsigned salt,
                                      const std::vector<std::vector<double>>& against = {}) {
  std::vector<double> v = start_vector(t.dim(), salt);
  orthogonalize(v, against);
  normalize(v);
  for (int iter = 0; iter < 5; ++iter) {
    v = shifted_solve(t, lambda, v);
    orthogonalize(v, against);
    normalize(v);
  }
  return v;
}

double neighbour_gap(const std::vector<double>& values, std::size_t a) {
  double gap = std::numeric_limits<double>::infinity();
  if (a > 0) gap = std::min(gap, values[a] - values[a - 1]);
  if (a + 1 < values.size()) gap = std::min(gap, values[a + 1] - values[a]);
  return gap;
}

bool recurrence_accepted(const Tridiagonal& t, const std::vector<double>& c, double lambda,
                         double gap, double scale, double* residual) {
  if (c.empty()) return false;
  *residual = residual_of(t, c, lambda);
  return *residual <= kAcceptResidual * scale && *residual <= kAcceptResidualOverGap * gap;
}

// Reflection k -> n-1-k splits a mirror-symmetric tridiagonal matrix into an
// even and an odd block.
struct ParityBlocks {
  Tridiagonal even;
  Tridiagonal odd;
  int n = 0;
};

ParityBlocks split_parity(const Tridiagonal& t) {
  ParityBlocks b;
  const int n = t.dim();
  b.n = n;
  const int half = n / 2;
  const double root2 = std::sqrt(2.0);
  for (int k = 0; k < half; ++k) {
    b.even.diag.push_back(t.diag[k]);
    b.odd.diag.push_back(t.diag[k]);
  }
  for (int k = 0; k + 1 < half; ++k) {
    b.even.off.push_back(t.off[k]);
    b.odd.off.push_back(t.off[k]);
  }
  if (n % 2 == 0) {
    // the centre coupling joins k = half-1 to its mirror image
    b.even.diag[half - 1] += t.off[half - 1];
    b.odd.diag[half - 1] -= t.off[half - 1];
  } else {
    b.even.diag.push_back(t.diag[half]);
    if (half > 0) b.even.off.push_back(root2 * t.off[half - 1]);
  }
  return b;
}

std::vector<double> unfold(const ParityBlocks& b, const std::vector<double>& x, bool even) {
  const int n = b.n;
  const int half = n / 2;
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < half; ++k) {
    v[k] = r * x[k];
    v[n - 1 - k] = even ? r * x[k] : -r * x[k];
  }
  if (n % 2 == 1 && even) v[half] = x[half];
  return v;
}

std::vector<double> block_vector(const Tridiagonal& block, const std::vector<double>& block_values,
                                 std::size_t index, unsigned salt) {
  const double lambda = block_values[index];
  const double scale = std::max(1.0, inf_norm(block));
  double residual = 0.0;
  std::vector<double> c = forward_recurrence(block, lambda);
  if (recurrence_accepted(block, c, lambda, neighbour_gap(block_values, index), scale, &residual)) {
    return c;
  }
  return inverse_iteration(block, lambda, salt);
}

void finish_vector(std::vector<double>& v) {
  normalize(v);
  fix_sign(v);
}

Spectrum empty_spectrum(const TridiagonalHamiltonian& h) {
  Spectrum s;
  s.hamiltonian = h;
  // may hold inf for large sectors; the orthonormality check works in logs
  s.epsilon_factors = log_epsilon_factors(h.sector.two_j, h.model, h.model == Model::kQal ? h.gamma : 0.0);
  for (double& x : s.epsilon_factors) x = std::exp(x);
  return s;
}

void store_vector(Spectrum& s, int a, const std::vector<double>& v) {
  for (int k = 0; k < s.dim(); ++k) s.vectors(k, a) = v[k];
  s.norm_constants[a] = v[0];
}

}  // namespace

SturmEvaluation sturm_eval(const TridiagonalHamiltonian& h, double lambda) {
  const Tridiagonal t = raw(h);
  return sturm_raw(t, lambda, pivot_floor(t));
}

std::pair<double, double> gershgorin_bounds(const TridiagonalHamiltonian& h) {
  return gershgorin(raw(h));
}

std::vector<double> eigenvalues_bisection(const TridiagonalHamiltonian& h, double tol) {
  return bisect_all(raw(h), tol);
}

const char* path_name(VectorPath path) {
  switch (path) {
    case VectorPath::kRecurrence:
      return "recurrence";
    case VectorPath::kParityBlock:
      return "parity-block";
    case VectorPath::kInverseIteration:
      return "inverse-iteration";
    case VectorPath::kOracle:
      return "oracle";
  }
  return "unknown";
}

bool is_reflection_symmetric(const TridiagonalHamiltonian& h) {
  const int n = h.dim();
  for (int k = 0; k < n; ++k)
    if (h.diag[k] != h.diag[n - 1 - k]) return false;
  for (int k = 0; k + 1 < n; ++k)
    if (h.off[k] != h.off[n - 2 - k]) return false;
  return true;
}

EigenvectorResult eigenvector_from_recurrence(const TridiagonalHamiltonian& h, double lambda) {
  if (!std::isfinite(lambda)) {
    throw std::domain_error("eigenvector_from_recurrence: lambda must be finite");
  }
  const Tridiagonal t = raw(h);
  const double scale = std::max(1.0, inf_norm(t));
  EigenvectorResult out;

  std::vector<double> v = forward_recurrence(t, lambda);
  double residual = v.empty() ? std::numeric_limits<double>::infinity() : residual_of(t, v, lambda);
  if (residual > kAcceptResidual * scale) {
    v = inverse_iteration(t, lambda, 0);
    if (is_reflection_symmetric(h)) {
      // keep the dominant parity component so the vector is well defined
      // inside near-degenerate mirror pairs
      const int n = t.dim();
      std::vector<double> plus(v), minus(v);
      for (int k = 0; k < n; ++k) {
        plus[k] = v[k] + v[n - 1 - k];
        minus[k] = v[k] - v[n - 1 - k];
      }
      v = norm2(plus) >= norm2(minus) ? plus : minus;
      normalize(v);
    }
    residual = residual_of(t, v, lambda);
    out.path = VectorPath::kInverseIteration;
  }
  if (!(residual <= kRejectResidual * scale)) {
    throw std::domain_error("eigenvector_from_recurrence: " + std::to_string(lambda) +
                            " is not an eigenvalue (residual " + std::to_string(residual) + ")");
  }
  fix_sign(v);
  out.coefficients = v;
  out.norm_constant = v[0];
  out.residual = residual;
  return out;
}

std::vector<double> log_epsilon_factors(int two_j, Model model, double gamma) {
  if (two_j < 0) {
    throw std::invalid_argument("epsilon_factors: two_j must be >= 0");
  }
  const double q = model == Model::kQal ? q_from_gamma(gamma).q : 1.0;
  std::vector<double> out(static_cast<std::size_t>(two_j + 1), 0.0);
  double acc = 0.0;
  for (int k = 1; k <= two_j; ++k) {
    acc += std::log(sym_qnum(k, q)) + std::log(sym_qnum(two_j - (k - 1), q));
    out[k] = 0.5 * acc;
  }
  return out;
}

std::vector<double> epsilon_factors(int two_j, Model model, double gamma) {
  std::vector<double> out = log_epsilon_factors(two_j, model, gamma);
  for (double& x : out) {
    x = std::exp(x);
    if (!std::isfinite(x)) {
      throw std::overflow_error("epsilon_factors: overflow at two_j = " + std::to_string(two_j) +
                                "; use log_epsilon_factors");
    }
  }
  return out;
}

Spectrum solve(const TridiagonalHamiltonian& h, double tol) {
  const Tridiagonal t = raw(h);
  const int n = t.dim();
  const double scale = std::max(1.0, inf_norm(t));
  Spectrum s = empty_spectrum(h);
  s.eigenvalues = bisect_all(t, tol);
  s.vectors = Eigen::MatrixXd::Zero(n, n);
  s.norm_constants.assign(static_cast<std::size_t>(n), 0.0);
  s.paths.assign(static_cast<std::size_t>(n), VectorPath::kRecurrence);

  std::vector<int> pending;
  for (int a = 0; a < n; ++a) {
    const double lambda = s.eigenvalues[a];
    std::vector<double> c = forward_recurrence(t, lambda);
    double residual = 0.0;
    if (recurrence_accepted(t, c, lambda, neighbour_gap(s.eigenvalues, a), scale, &residual)) {
      finish_vector(c);
      store_vector(s, a, c);
    } else {
      pending.push_back(a);
    }
  }
  if (pending.empty()) return s;

  if (n >= 2 && is_reflection_symmetric(h)) {
    const ParityBlocks blocks = split_parity(t);
    const std::vector<double> even_values = bisect_all(blocks.even, tol);
    const std::vector<double> odd_values =
        blocks.odd.dim() > 0 ? bisect_all(blocks.odd, tol) : std::vector<double>{};
    // merge the two block spectra; the merged order matches the full spectrum
    struct Label {
      double value;
      bool even;
      std::size_t index;
    };
    std::vector<Label> merged;
    for (std::size_t i = 0; i < even_values.size(); ++i) merged.push_back({even_values[i], true, i});
    for (std::size_t i = 0; i < odd_values.size(); ++i) merged.push_back({odd_values[i], false, i});
    std::stable_sort(merged.begin(), merged.end(),
                     [](const Label& x, const Label& y) { return x.value < y.value; });
    for (int a : pending) {
      const Label& label = merged[a];
      const Tridiagonal& block = label.even ? blocks.even : blocks.odd;
      const std::vector<double>& values = label.even ? even_values : odd_values;
      std::vector<double> v =
          unfold(blocks, block_vector(block, values, label.index, static_cast<unsigned>(a)), label.even);
      finish_vector(v);
      store_vector(s, a, v);
      s.paths[a] = VectorPath::kParityBlock;
    }
  } else {
    // clusters of pending eigenvalues share an orthonormalized inverse iteration
    const double cluster_gap = 1e-8 * scale;
    std::vector<std::vector<double>> cluster;
    int previous = -2;
    for (int a : pending) {
      if (a != previous + 1 || s.eigenvalues[a] - s.eigenvalues[previous] > cluster_gap) cluster.clear();
      std::vector<double> v = inverse_iteration(t, s.eigenvalues[a], static_cast<unsigned>(a), cluster);
      cluster.push_back(v);
      finish_vector(v);
      store_vector(s, a, v);
      s.paths[a] = VectorPath::kInverseIteration;
      previous = a;
    }
  }

  for (int a : pending) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v[k] = s.vectors(k, a);
    const double residual = residual_of(t, v, s.eigenvalues[a]);
    if (!(residual <= kRejectResidual * scale)) {
      throw std::logic_error("solve: eigenvector " + std::to_string(a) + " did not converge");
    }
  }
  return s;
}

Spectrum dense_oracle(const TridiagonalHamiltonian& h) {
  // Implicit-shift QL with accumulated rotations, carried in long double so
  // the absolute error eps * ||H|| stays small for strongly graded AL dimers.
  using Real = long double;
  const int n = h.dim();
  std::vector<Real> d(h.diag.begin(), h.diag.end());
  std::vector<Real> e(static_cast<std::size_t>(n), 0.0L);
  for (int k = 0; k + 1 < n; ++k) e[k] = h.off[k];
  std::vector<Real> z(static_cast<std::size_t>(n) * n, 0.0L);  // column major
  for (int k = 0; k < n; ++k) z[static_cast<std::size_t>(k) * n + k] = 1.0L;
  auto at = [&](int row, int col) -> Real& { return z[static_cast<std::size_t>(col) * n + row]; };

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      int m = l;
      for (; m + 1 < n; ++m) {
        const Real dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<Real>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (++iter > 60) {
        throw std::runtime_error("dense_oracle: QL iteration did not converge");
      }
      Real g = (d[l + 1] - d[l]) / (2.0L * e[l]);
      Real r = std::hypot(g, 1.0L);
      g = d[m] - d[l] + e[l] / (g + (g >= 0 ? r : -r));
      Real s = 1.0L, c = 1.0L, p = 0.0L;
      int i = m - 1;
      for (; i >= l; --i) {
        Real f = s * e[i];
        const Real b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0L) {
          d[i + 1] -= p;
          e[m] = 0.0L;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0L * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        for (int k = 0; k < n; ++k) {
          f = at(k, i + 1);
          at(k, i + 1) = s * at(k, i) + c * f;
          at(k, i) = c * at(k, i) - s * f;
        }
      }
      if (r == 0.0L && i >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0L;
    }
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](int x, int y) { return d[x] < d[y]; });

  Spectrum s = empty_spectrum(h);
  for (int a = 0; a < n; ++a) s.eigenvalues.push_back(static_cast<double>(d[order[a]]));
  s.vectors = Eigen::MatrixXd::Zero(n, n);
  s.norm_constants.assign(static_cast<std::size_t>(n), 0.0);
  s.paths.assign(static_cast<std::size_t>(n), VectorPath::kOracle);
  for (int a = 0; a < n; ++a) {
    const int col = order[a];
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v[k] = static_cast<double>(at(k, col));
    finish_vector(v);
    store_vector(s, a, v);
  }
  return s;
}

OrthonormalityReport df_orthonormality_check(const Spectrum& spectrum) {
  const int n = spectrum.dim();
  const TridiagonalHamiltonian& h = spectrum.hamiltonian;
  // weights: products of the actual couplings, epsilon^k eps_k for DNLS. A
  // common factor cancels, so they are taken relative to the largest one.
  std::vector<double> log_w =
      log_epsilon_factors(h.sector.two_j, h.model, h.model == Model::kQal ? h.gamma : 0.0);
  if (h.model == Model::kQdnls && h.epsilon != 0.0) {
    for (int k = 0; k < n; ++k) log_w[k] += k * std::log(std::abs(h.epsilon));
  }
  const double top = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> weight(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) weight[k] = std::max(std::exp(log_w[k] - top), kTiny);
  Eigen::MatrixXd psi(n, n);
  for (int a = 0; a < n; ++a) {
    const double norm = spectrum.norm_constants[a];
    for (int k = 0; k < n; ++k) psi(k, a) = spectrum.vectors(k, a) * weight[k] / norm;
  }
  OrthonormalityReport report;
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k) sum += (psi(k, a) / weight[k]) * (psi(k, b) / weight[k]);
      sum *= spectrum.norm_constants[a] * spectrum.norm_constants[b];
      if (a == b) {
        report.max_diagonal = std::max(report.max_diagonal, std::abs(sum - 1.0));
      } else {
        report.max_off_diagonal = std::max(report.max_off_diagonal, std::abs(sum));
      }
    }
  }
  return report;
}

double christoffel_darboux_residual(const TridiagonalHamiltonian& h, double x) {
  const int n = h.dim();
  double p_prev = 0.0, p = 1.0, dp_prev = 0.0, dp = 0.0;
  double weight = 1.0;  // w_k
  double sum = 0.0;
  double last_p = 1.0, last_w = 1.0;
  for (int k = 0; k < n; ++k) {
    sum += (p / weight) * (p / weight);
    last_p = p;
    last_w = weight;
    const double back = k > 0 ? h.off[k - 1] * h.off[k - 1] : 0.0;
    const double p_next = (x - h.diag[k]) * p - back * p_prev;
    const double dp_next = p + (x - h.diag[k]) * dp - back * dp_prev;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
    if (k + 1 < n) weight *= h.off[k];
  }
  const double closed = dp * last_p / (last_w * last_w);
  return std::abs(sum - closed) / std::abs(sum);
}

double completeness_check(const Spectrum& spectrum) {
  const int n = spectrum.dim();
  const Eigen::MatrixXd sum = spectrum.vectors * spectrum.vectors.transpose();
  return (sum - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

double max_eigen_residual(const Spectrum& spectrum) {
  const Tridiagonal t = raw(spectrum.hamiltonian);
  double worst = 0.0;
  for (int a = 0; a < spectrum.dim(); ++a) {
    std::vector<double> v(spectrum.vectors.col(a).data(), spectrum.vectors.col(a).data() + spectrum.dim());
    worst = std::max(worst, residual_of(t, v, spectrum.eigenvalues[a]));
  }
  return worst;
}

double min_gap(const std::vector<double>& eigenvalues) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < eigenvalues.size(); ++k) gap = std::min(gap, eigenvalues[k] - eigenvalues[k - 1]);
  return gap;
}

ParityReport parity_structure_check(const Spectrum& spectrum, double tol) {
  if (spectrum.hamiltonian.model != Model::kQal) {
    throw std::invalid_argument("parity_structure_check: needs an AL dimer spectrum");
  }
  ParityReport report;
  const int n = spectrum.dim();
  report.expected_zero_count = n % 2 == 1 ? 1 : 0;
  for (int a = 0; a < n; ++a) {
    const double lambda = spectrum.eigenvalues[a];
    const double mirror = std::abs(lambda + spectrum.eigenvalues[n - 1 - a]);
    report.max_antisymmetry = std::max(report.max_antisymmetry, mirror);
    const bool is_zero = std::abs(lambda) <= tol;
    if (is_zero) ++report.zero_count;
    const bool centre = n % 2 == 1 && a == n / 2;
    if (mirror > tol || is_zero != centre) report.offending.push_back(a);
  }
  report.passed = report.offending.empty() && report.zero_count == report.expected_zero_count;
  return report;
}

std::vector<double> characteristic_polynomial(const TridiagonalHamiltonian& h) {
  std::vector<double> prev;       // p_{-1} = 0
  std::vector<double> cur{1.0};   // p_0 = 1
  for (int k = 0; k < h.dim(); ++k) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i + 1] += cur[i];
      next[i] -= h.diag[k] * cur[i];
    }
    if (k > 0) {
      const double o2 = h.off[k - 1] * h.off[k - 1];
      for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= o2 * prev[i];
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace qdimer
