#pragma once

// Gauss-Lobatto nodal bases on [-1,1] and their tensor products on the
// reference square.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace filtdg {

/// Dense row-major matrix with value semantics, sized for small basis
/// operators.
class SmallMatrix {
 public:
  SmallMatrix() = default;
  SmallMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Legendre polynomial P_n and P_{n-1} at x by the three-term recurrence.
inline void legendre_pair(int n, double x, double& pn, double& pn1) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) {
    pn = 1.0;
    pn1 = 0.0;
    return;
  }
  for (int m = 2; m <= n; ++m) {
    const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  pn1 = p0;
}

/// Gauss-Lobatto nodes: roots of (1-x^2) P_k'(x), ascending. k = 0 yields
/// the single midpoint node.
inline std::vector<double> lobatto_nodes(int k) {
  if (k < 0) throw std::invalid_argument("lobatto_nodes: degree must be >= 0");
  if (k == 0) return {0.0};
  std::vector<double> x(k + 1);
  for (int i = 0; i <= k; ++i) x[i] = -std::cos(std::numbers::pi * i / k);
  // Newton iteration on (1-x^2)P_k' written through the Legendre recurrence;
  // endpoints are fixed points of the update.
  for (int i = 0; i <= k; ++i) {
    double xi = x[i];
    for (int it = 0; it < 100; ++it) {
      double pk = 0.0;
      double pk1 = 0.0;
      legendre_pair(k, xi, pk, pk1);
      const double step = (xi * pk - pk1) / ((k + 1) * pk);
      xi -= step;
      if (std::abs(step) < 1e-14) break;
    }
    x[i] = xi;
  }
  x.front() = -1.0;
  x.back() = 1.0;
  // Odd k yields symmetric pairs; enforce exact antisymmetry and a zero midpoint.
  for (int i = 0; i <= k / 2; ++i) {
    const double s = 0.5 * (x[k - i] - x[i]);
    x[i] = -s;
    x[k - i] = s;
  }
  if (k % 2 == 0) x[k / 2] = 0.0;
  return x;
}

/// Quadrature weights associated with lobatto_nodes(k).
inline std::vector<double> lobatto_weights(int k) {
  if (k == 0) return {2.0};
  const auto x = lobatto_nodes(k);
  std::vector<double> w(k + 1);
  for (int i = 0; i <= k; ++i) {
    double pk = 0.0;
    double pk1 = 0.0;
    legendre_pair(k, x[i], pk, pk1);
    w[i] = 2.0 / (k * (k + 1.0) * pk * pk);
  }
  return w;
}

/// Gauss-Legendre nodes and weights with n points (exact to degree 2n-1).
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double xi = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double pn = 0.0;
      double pn1 = 0.0;
      legendre_pair(n, xi, pn, pn1);
      dp = n * (xi * pn - pn1) / (xi * xi - 1.0);
      const double step = pn / dp;
      xi -= step;
      if (std::abs(step) < 1e-15) break;
    }
    double pn = 0.0;
    double pn1 = 0.0;
    legendre_pair(n, xi, pn, pn1);
    dp = n * (xi * pn - pn1) / (xi * xi - 1.0);
    x[i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

/// Lagrange cardinal basis on the Gauss-Lobatto nodes of degree k.
class LobattoBasis1D {
 public:
  explicit LobattoBasis1D(int k)
      : degree_(k), nodes_(lobatto_nodes(k)), weights_(lobatto_weights(k)),
        bary_(nodes_.size(), 1.0) {
    const std::size_t n = nodes_.size();
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        if (m != j) bary_[j] /= (nodes_[j] - nodes_[m]);
    if (k >= 1) {
      diff_ = SmallMatrix(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        double diag = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          const double d = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
          diff_(i, j) = d;
          diag -= d;
        }
        diff_(i, i) = diag;
      }
    }
  }

  int degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// D(i, j) = derivative of cardinal polynomial j at node i.
  const SmallMatrix& diff_matrix() const {
    if (degree_ < 1) throw std::invalid_argument("diff_matrix: degree too low (k = 0)");
    return diff_;
  }

  /// Value of the j-th cardinal polynomial at x.
  double eval(std::size_t j, double x) const {
    double v = 1.0;
    for (std::size_t m = 0; m < nodes_.size(); ++m)
      if (m != j) v *= (x - nodes_[m]) / (nodes_[j] - nodes_[m]);
    return v;
  }

  /// Derivative of the j-th cardinal polynomial at x.
  double eval_derivative(std::size_t j, double x) const {
    const std::size_t n = nodes_.size();
    double total = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      if (l == j) continue;
      double term = 1.0 / (nodes_[j] - nodes_[l]);
      for (std::size_t m = 0; m < n; ++m)
        if (m != j && m != l) term *= (x - nodes_[m]) / (nodes_[j] - nodes_[m]);
      total += term;
    }
    return total;
  }

  /// M(q, j) = cardinal j evaluated at points[q].
  SmallMatrix interpolation_matrix(std::span<const double> points) const {
    SmallMatrix m(points.size(), size());
    for (std::size_t q = 0; q < points.size(); ++q)
      for (std::size_t j = 0; j < size(); ++j) m(q, j) = eval(j, points[q]);
    return m;
  }

  /// Interpolation onto the nodes of child `half` (0 = [-1,0], 1 = [0,1]).
  SmallMatrix child_interpolation(int half) const {
    std::vector<double> pts(size());
    const double shift = half == 0 ? -1.0 : 1.0;
    for (std::size_t q = 0; q < size(); ++q) pts[q] = 0.5 * (nodes_[q] + shift);
    return interpolation_matrix(pts);
  }

 private:
  int degree_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> bary_;
  SmallMatrix diff_;
};

inline double eval_lagrange(const LobattoBasis1D& basis, std::size_t j, double x) {
  return basis.eval(j, x);
}

/// Tensor-product Q_k basis on [-1,1]^2. Node (i, j) has index i + (k+1) j,
/// i running along x.
class TensorBasis2D {
 public:
  explicit TensorBasis2D(int k) : basis1d_(k) {}

  const LobattoBasis1D& basis1d() const noexcept { return basis1d_; }
  int degree() const noexcept { return basis1d_.degree(); }
  std::size_t n1d() const noexcept { return basis1d_.size(); }
  std::size_t n_nodes() const noexcept { return n1d() * n1d(); }
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i + n1d() * j; }

  double shape(std::size_t node, double xi, double eta) const {
    return basis1d_.eval(node % n1d(), xi) * basis1d_.eval(node / n1d(), eta);
  }

  /// Quadrature weight of a node on the reference square.
  double weight(std::size_t node) const {
    return basis1d_.weights()[node % n1d()] * basis1d_.weights()[node / n1d()];
  }

 private:
  LobattoBasis1D basis1d_;
};

}  // namespace filtdg
