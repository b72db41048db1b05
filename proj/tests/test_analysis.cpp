#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "filtdg/analysis.hpp"

using namespace filtdg;

namespace {

std::shared_ptr<const QuadMesh> unit_mesh(int n) {
  return std::make_shared<const QuadMesh>(QuadMesh::build_uniform(n, n, {}));
}

}  // namespace

TEST(ErrorNorms, ExactSamplesGiveZero) {
  NodalField<1> f(unit_mesh(4), 2);
  auto g = [](const Point& x) { return std::sin(x[0]) + x[1]; };
  f.fill([&](const Point& x) { return std::array<double, 1>{g(x)}; });
  const auto r = error_norms(f, 0, g);
  EXPECT_EQ(r.l1_rel, 0.0);
  EXPECT_EQ(r.l2_rel, 0.0);
  EXPECT_EQ(r.linf_rel, 0.0);
  EXPECT_FALSE(r.absolute);
}

TEST(ErrorNorms, ConstantOffset) {
  NodalField<1> f(unit_mesh(3), 1);
  f.fill([](const Point&) { return std::array<double, 1>{2.3}; });
  const auto r = error_norms(f, 0, [](const Point&) { return 2.0; });
  EXPECT_NEAR(r.linf_rel, 0.3 / 2.0, 1e-15);
  EXPECT_NEAR(r.l1_rel, 0.3 / 2.0, 1e-15);
  EXPECT_NEAR(r.l2_rel, 0.3 / 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(r.max_value, 2.3);
  EXPECT_DOUBLE_EQ(r.min_value, 2.3);
}

TEST(ErrorNorms, ZeroExactNormFallsBackToAbsolute) {
  NodalField<1> f(unit_mesh(2), 1);
  f.fill([](const Point&) { return std::array<double, 1>{0.25}; });
  const auto r = error_norms(f, 0, [](const Point&) { return 0.0; });
  EXPECT_TRUE(r.absolute);
  EXPECT_NEAR(r.l1_rel, 0.25, 1e-15);
  EXPECT_NEAR(r.linf_rel, 0.25, 1e-15);
  EXPECT_THROW(error_norms(f, 1, [](const Point&) { return 0.0; }), std::out_of_range);
}

TEST(ErrorNorms, L1MatchesQuadratureByHand) {
  // On one k=1 cell the nodes carry the weights 1/4 of the area each.
  NodalField<1> f(unit_mesh(1), 1);
  f.fill([](const Point& x) { return std::array<double, 1>{x[0] + x[1]}; });  // 0,1,1,2
  const auto r = error_norms(f, 0, [](const Point&) { return 1.0; });
  EXPECT_NEAR(r.l1_rel, 0.5, 1e-15);  // mean |u-1| = (1+0+0+1)/4
  EXPECT_NEAR(r.l2_rel, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(r.linf_rel, 1.0, 1e-15);
}

TEST(ConvergenceRate, Examples) {
  EXPECT_NEAR(convergence_rate({1.0, 0.25}, {2.0})[0], 2.0, 1e-15);
  EXPECT_NEAR(convergence_rate({3.63e-3, 8.02e-4}, {2.0})[0], 2.18, 5e-3);
  EXPECT_NEAR(convergence_rate({8.44e-3, 6.23e-3}, {2.0})[0], 0.44, 5e-3);
  EXPECT_EQ(convergence_rate({0.1, 0.1}, {2.0})[0], 0.0);
  const auto r = convergence_rate({1.0, 0.25, 0.0625}, {1.0, 2.0, 2.0});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[1], 2.0, 1e-15);
}

TEST(ConvergenceRate, InvalidInput) {
  EXPECT_THROW(convergence_rate({1.0, 0.0}, {2.0}), std::invalid_argument);
  EXPECT_THROW(convergence_rate({1.0, -1.0}, {2.0}), std::invalid_argument);
  EXPECT_THROW(convergence_rate({1.0}, {}), std::invalid_argument);
  EXPECT_THROW(convergence_rate({1.0, 0.5, 0.2}, {2.0, 2.0, 2.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(convergence_rate({1.0, 0.5}, {1.0}), std::invalid_argument);
}

TEST(Diagnostics, DriftAndDistance) {
  EXPECT_NEAR(relative_drift(2.0, 2.002), 1e-3, 1e-15);
  EXPECT_NEAR(relative_drift(-2.0, -2.002), -1e-3, 1e-15);
  EXPECT_EQ(relative_drift(0.0, 0.5), 0.5);
  EXPECT_NEAR(relative_drift(1e-17, 1e-3, 2.0), 5e-4, 1e-15);
  EXPECT_NEAR(relative_drift(4.0, 4.4, 2.0), 0.1, 1e-15);
  auto mesh = unit_mesh(2);
  NodalField<1> a(mesh, 1), b(mesh, 1);
  a.fill([](const Point&) { return std::array<double, 1>{1.0}; });
  b.fill([](const Point&) { return std::array<double, 1>{0.5}; });
  EXPECT_NEAR(l2_distance(a, b, 0), 0.5, 1e-15);
  b.fill([](const Point& x) { return std::array<double, 1>{x[0] - 0.5}; });
  EXPECT_NEAR(l1_norm(b, 0), 0.25, 1e-15);
  // Separately built but identical meshes are congruent.
  NodalField<1> c(unit_mesh(2), 1);
  EXPECT_NEAR(l2_distance(a, c, 0), 1.0, 1e-15);
  EXPECT_THROW(l2_distance(a, NodalField<1>(unit_mesh(3), 1), 0), std::invalid_argument);
}

TEST(Diagnostics, ExtremaTracker) {
  auto mesh = unit_mesh(2);
  NodalField<1> f(mesh, 1);
  ExtremaTracker t;
  f.fill([](const Point& x) { return std::array<double, 1>{x[0]}; });
  t.record(f, 0);
  f.fill([](const Point& x) { return std::array<double, 1>{2.0 * x[0] - 0.5}; });
  t.record(f, 0);
  EXPECT_EQ(t.global_max(), 1.5);
  EXPECT_EQ(t.global_min(), -0.5);
  EXPECT_EQ(t.last_max(), 1.5);
  EXPECT_EQ(t.last_min(), -0.5);
  f.fill([](const Point&) { return std::array<double, 1>{0.2}; });
  t.record(f, 0);
  EXPECT_EQ(t.global_max(), 1.5);
  EXPECT_EQ(t.last_max(), 0.2);
}

TEST(Diagnostics, L2DistanceIsAMetric) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto mesh = unit_mesh(3);
  for (int trial = 0; trial < 50; ++trial) {
    NodalField<1> a(mesh, 2), b(mesh, 2), c(mesh, 2);
    for (auto* f : {&a, &b, &c}) f->fill([&](const Point&) { return std::array<double, 1>{u(rng)}; });
    EXPECT_NEAR(l2_distance(a, b, 0), l2_distance(b, a, 0), 1e-12);
    EXPECT_LE(l2_distance(a, c, 0), l2_distance(a, b, 0) + l2_distance(b, c, 0) + 1e-12);
    EXPECT_EQ(l2_distance(a, a, 0), 0.0);
  }
}
