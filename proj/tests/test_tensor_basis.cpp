#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "filtdg/tensor_basis.hpp"

using namespace filtdg;

namespace {

// Independent root finder: bisection on (1 - x^2) P_k'(x), with P_k' from
// the three-term recurrence evaluated directly.
double legendre_derivative(int k, double x) {
  // P_k'(x) = k (x P_k - P_{k-1}) / (x^2 - 1), evaluated away from +-1.
  double p0 = 1.0, p1 = x;
  if (k == 0) return 0.0;
  for (int n = 1; n < k; ++n) {
    const double p2 = ((2 * n + 1) * x * p1 - n * p0) / (n + 1);
    p0 = p1;
    p1 = p2;
  }
  return k * (x * p1 - p0) / (x * x - 1.0);
}

std::vector<double> bisection_lobatto(int k) {
  std::vector<double> roots{-1.0};
  const int samples = 20011;  // odd, so no sample lands on the root x = 0
  double a = -1.0 + 1e-9;
  double fa = legendre_derivative(k, a);
  for (int i = 1; i <= samples; ++i) {
    double b = -1.0 + 1e-9 + (2.0 - 2e-9) * i / samples;
    double fb = legendre_derivative(k, b);
    if (fa * fb < 0.0) {
      double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (lo + hi);
        const double fm = legendre_derivative(k, m);
        if (flo * fm <= 0.0) {
          hi = m;
        } else {
          lo = m;
          flo = fm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  roots.push_back(1.0);
  return roots;
}

}  // namespace

TEST(LobattoNodes, LowDegreesAreExact) {
  EXPECT_EQ(lobatto_nodes(1), (std::vector<double>{-1.0, 1.0}));
  const auto n2 = lobatto_nodes(2);
  ASSERT_EQ(n2.size(), 3u);
  EXPECT_DOUBLE_EQ(n2[0], -1.0);
  EXPECT_NEAR(n2[1], 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(n2[2], 1.0);
  const auto n3 = lobatto_nodes(3);
  ASSERT_EQ(n3.size(), 4u);
  EXPECT_NEAR(n3[1], -1.0 / std::sqrt(5.0), 1e-14);
  EXPECT_NEAR(n3[2], 1.0 / std::sqrt(5.0), 1e-14);
}

TEST(LobattoNodes, MatchBisectionOracle) {
  for (int k = 1; k <= 8; ++k) {
    const auto nodes = lobatto_nodes(k);
    const auto oracle = bisection_lobatto(k);
    ASSERT_EQ(nodes.size(), oracle.size()) << "k = " << k;
    for (std::size_t i = 0; i < nodes.size(); ++i) EXPECT_NEAR(nodes[i], oracle[i], 1e-12);
  }
}

TEST(LobattoWeights, IntegratePolynomialsUpTo2kMinus1) {
  for (int k = 1; k <= 6; ++k) {
    const auto x = lobatto_nodes(k);
    const auto w = lobatto_weights(k);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 2.0, 1e-14);
    for (int p = 0; p <= 2 * k - 1; ++p) {
      double q = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) q += w[i] * std::pow(x[i], p);
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
      EXPECT_NEAR(q, exact, 1e-13) << "k = " << k << ", p = " << p;
    }
  }
}

TEST(LobattoWeights, DegreeTwoWeights) {
  const auto w = lobatto_weights(2);
  EXPECT_NEAR(w[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(w[1], 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(w[2], 1.0 / 3.0, 1e-15);
}

TEST(GaussLegendre, IntegratesTo2nMinus1) {
  std::vector<double> x, w;
  gauss_legendre(4, x, w);
  for (int p = 0; p <= 7; ++p) {
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) q += w[i] * std::pow(x[i], p);
    EXPECT_NEAR(q, p % 2 == 1 ? 0.0 : 2.0 / (p + 1), 1e-14);
  }
}

TEST(LobattoBasis1D, CardinalAndPartitionOfUnity) {
  LobattoBasis1D b2(2);
  EXPECT_DOUBLE_EQ(eval_lagrange(b2, 1, 0.0), 1.0);
  LobattoBasis1D b1(1);
  EXPECT_DOUBLE_EQ(eval_lagrange(b1, 0, 0.0), 0.5);
  for (int k = 1; k <= 5; ++k) {
    LobattoBasis1D b(k);
    double sum = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) sum += b.eval(j, 0.37);
    EXPECT_NEAR(sum, 1.0, 1e-14);
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        EXPECT_NEAR(b.eval(j, b.nodes()[i]), i == j ? 1.0 : 0.0, 1e-14);
  }
}

TEST(LobattoBasis1D, DiffMatrixDegreeOne) {
  LobattoBasis1D b(1);
  const auto& d = b.diff_matrix();
  EXPECT_DOUBLE_EQ(d(0, 0), -0.5);
  EXPECT_DOUBLE_EQ(d(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(d(1, 0), -0.5);
  EXPECT_DOUBLE_EQ(d(1, 1), 0.5);
}

TEST(LobattoBasis1D, DiffMatrixIsExactOnPolynomials) {
  LobattoBasis1D b2(2);
  const auto& d2 = b2.diff_matrix();
  double dx2 = 0.0;
  for (std::size_t j = 0; j < 3; ++j) dx2 += d2(0, j) * b2.nodes()[j] * b2.nodes()[j];
  EXPECT_NEAR(dx2, -2.0, 1e-14);

  for (int k = 1; k <= 6; ++k) {
    LobattoBasis1D b(k);
    const auto& d = b.diff_matrix();
    for (int p = 0; p <= k; ++p)
      for (std::size_t i = 0; i < b.size(); ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) v += d(i, j) * std::pow(b.nodes()[j], p);
        const double exact = p == 0 ? 0.0 : p * std::pow(b.nodes()[i], p - 1);
        EXPECT_NEAR(v, exact, 1e-12) << "k = " << k << ", p = " << p;
      }
  }
}

TEST(LobattoBasis1D, DiffMatrixMatchesAnalyticDerivative) {
  LobattoBasis1D b(4);
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      EXPECT_NEAR(b.diff_matrix()(i, j), b.eval_derivative(j, b.nodes()[i]), 1e-12);
}

TEST(LobattoBasis1D, DegreeZeroDiffMatrixSignalsError) {
  EXPECT_THROW(LobattoBasis1D(0).diff_matrix(), std::invalid_argument);
}

TEST(LobattoBasis1D, ChildInterpolationReproducesPolynomials) {
  LobattoBasis1D b(3);
  auto f = [](double x) { return 1.0 - 2.0 * x + 0.5 * x * x * x; };
  for (int half : {0, 1}) {
    const auto m = b.child_interpolation(half);
    for (std::size_t q = 0; q < b.size(); ++q) {
      double v = 0.0;
      for (std::size_t j = 0; j < b.size(); ++j) v += m(q, j) * f(b.nodes()[j]);
      const double xq = 0.5 * (b.nodes()[q] + (half == 0 ? -1.0 : 1.0));
      EXPECT_NEAR(v, f(xq), 1e-13);
    }
  }
}

TEST(TensorBasis2D, IndexingShapeAndWeights) {
  TensorBasis2D t(2);
  EXPECT_EQ(t.n1d(), 3u);
  EXPECT_EQ(t.n_nodes(), 9u);
  EXPECT_EQ(t.index(2, 1), 5u);
  double wsum = 0.0;
  for (std::size_t n = 0; n < t.n_nodes(); ++n) wsum += t.weight(n);
  EXPECT_NEAR(wsum, 4.0, 1e-14);
  const auto& x = t.basis1d().nodes();
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 3; ++i)
      EXPECT_NEAR(t.shape(t.index(i, j), x[i], x[j]), 1.0, 1e-14);
  double s = 0.0;
  for (std::size_t n = 0; n < t.n_nodes(); ++n) s += t.shape(n, 0.3, -0.7);
  EXPECT_NEAR(s, 1.0, 1e-14);
}
