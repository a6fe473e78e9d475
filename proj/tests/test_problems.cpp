#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mmfd/mmfd.hpp"
#include "oracles.hpp"

namespace {

using namespace mmfd;
constexpr double pi = std::numbers::pi;

/// u_t + (b u)_x + c u - (a u_x)_x - f at (x, t); ht is the time step of
/// the difference quotient.
double residual_1d(const Problem1D& p, const Field1D& u, double x, double t, double ht) {
  const double ut = oracle::d1([&](double s) { return u(x, s); }, t, ht);
  auto flux = [&](double s) { return p.a(s, t) * oracle::d1([&](double r) { return u(r, t); }, s); };
  const double bux = oracle::d1([&](double s) { return p.b(s, t) * u(s, t); }, x);
  return ut + bux + p.c(x, t) * u(x, t) - oracle::d1(flux, x) - p.f(x, t);
}

TEST(Problems, HeatSourceValue) {
  const auto ex = example_5_1(2 * pi, Variant51::sin);
  EXPECT_NEAR(ex.problem.f(pi / 2, 0.0), pi + 2, 1e-14);
}

TEST(Problems, ExactSolutionsSatisfyTheEquation1D) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ut(0.0, 1.0), us(0.02, 0.98);
  for (double omega : {2 * pi, 20 * pi}) {
    std::vector<Example1D> exs{example_5_1(omega, Variant51::sin), example_5_1(omega, Variant51::cos),
                               example_5_2(omega)};
    for (std::size_t e = 0; e < exs.size(); ++e) {
      const auto& ex = exs[e];
      for (int i = 0; i < 100; ++i) {
        const double t = 0.01 + 0.98 * ut(rng);
        // Stay clear of the pinch times of the moving interval.
        const double xl = ex.problem.x_left(t), xr = ex.problem.x_right(t);
        if (xr - xl < 0.5) continue;
        const double x = xl + us(rng) * (xr - xl);
        const double r = residual_1d(ex.problem, ex.exact, x, t, 1e-4);
        EXPECT_LE(std::abs(r), 1e-8 * std::max(1.0, std::abs(ex.problem.f(x, t))))
            << "example " << e << " omega " << omega << " x=" << x << " t=" << t;
      }
    }
  }
}

TEST(Problems, ExactSolutionSatisfiesTheEquation2D) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> ut(0.01, 0.99), us(0.05, pi - 0.05);
  const auto ex = example_5_3(20 * pi);
  const auto& p = ex.problem;
  const auto& u = ex.exact;
  for (int i = 0; i < 100; ++i) {
    const double x = us(rng), y = us(rng), t = ut(rng);
    const double u_t = oracle::d1([&](double s) { return u(x, y, s); }, t, 1e-3);
    const double uxx = oracle::d2([&](double s) { return u(s, y, t); }, x);
    const double uyy = oracle::d2([&](double s) { return u(x, s, t); }, y);
    EXPECT_NEAR(u_t - uxx - uyy, p.f(x, y, t), 1e-8);
    EXPECT_NEAR(p.u0(x, y), u(x, y, 0.0), 1e-14);
  }
  EXPECT_NEAR(p.u0(pi / 2, pi / 2), 2.0, 1e-15);
}

TEST(Problems, BoundaryAndInitialDataMatchExactSolutions) {
  for (double omega : {2 * pi, 20 * pi}) {
    std::vector<Example1D> exs{example_5_1(omega, Variant51::sin), example_5_1(omega, Variant51::cos),
                               example_5_2(omega)};
    for (const auto& ex : exs) {
      for (double t : {0.0, 0.13, 0.5, 0.77}) {
        const double xl = ex.problem.x_left(t), xr = ex.problem.x_right(t);
        if (xr - xl < 0.5) continue;
        EXPECT_NEAR(ex.problem.g(xl, t), ex.exact(xl, t), 1e-12);
        EXPECT_NEAR(ex.problem.g(xr, t), ex.exact(xr, t), 1e-12);
      }
      for (double x : {0.1, 1.0, 2.5}) EXPECT_NEAR(ex.problem.u0(x), ex.exact(x, 0.0), 1e-12);
    }
    const auto ex = example_5_3(omega);
    for (double s : {0.0, 0.7, 2.0, pi}) {
      for (double t : {0.2, 0.6}) {
        EXPECT_NEAR(ex.problem.g(s, 0.0, t), ex.exact(s, 0.0, t), 1e-12);
        EXPECT_NEAR(ex.problem.g(pi, s, t), ex.exact(pi, s, t), 1e-12);
      }
    }
  }
}

TEST(Problems, MeshesMatchTheirDescriptions) {
  const TimeGrid g = TimeGrid::uniform(1.0, 8);
  const auto m51 = example_5_1(2 * pi, Variant51::sin).mesh(g, 16);
  EXPECT_NEAR(m51.level_position(2, 4), 4 * pi / 16 + 0.25 * std::sin(pi / 2) * std::sin(2 * pi * 0.25), 1e-15);
  const auto ex52 = example_5_2(2 * pi);
  const auto m52 = ex52.mesh(g, 10);
  EXPECT_NEAR(m52.level_position(1, 0), pi / 3 * std::sin(2 * pi / 8), 1e-15);
  EXPECT_NEAR(m52.level_position(1, 10), pi - pi / 3 * std::sin(2 * pi / 8), 1e-15);
  EXPECT_TRUE(ex52.problem.moving_domain);
  ASSERT_TRUE(ex52.forced_bc.has_value());
  EXPECT_EQ(*ex52.forced_bc, BcStrategy::moving_domain_extrapolated);
  const auto m53 = example_5_3(2 * pi).mesh(g, 8, 8);
  const double d = 0.2 * std::sin(2 * pi * 3 / 8) * std::sin(2 * pi * 1 / 8) * std::sin(2 * pi * 0.25);
  EXPECT_NEAR(m53.level_x(2, 3, 1), pi * 3 / 8 + d, 1e-15);
  EXPECT_NEAR(m53.level_y(2, 3, 1), pi * 1 / 8 + d, 1e-15);
  EXPECT_EQ(m53.level_x(2, 0, 5), 0.0);
}

TEST(Problems, HomogeneousVariant) {
  const auto p = homogeneous_variant(example_5_1(2 * pi, Variant51::cos).problem);
  EXPECT_TRUE(p.homogeneous);
  EXPECT_EQ(p.f(1.0, 0.5), 0.0);
  EXPECT_EQ(p.g(0.0, 0.5), 0.0);
  EXPECT_EQ(p.u0(0.0), 2.0);
}

TEST(Problems, MaxErrorOnSampledHistory) {
  const auto ex = example_5_1(2 * pi, Variant51::cos);
  const TimeGrid g = TimeGrid::uniform(1.0, 5);
  const auto mesh = ex.mesh(g, 12);
  const auto d = build_conservative(ex.problem, mesh);
  SolutionHistory h{g, {}, {}, {}, {}, {}};
  for (std::size_t n = 0; n < g.levels(); ++n) {
    Vector u(11), ub(2);
    for (std::size_t j = 1; j < 12; ++j) u[static_cast<Eigen::Index>(j - 1)] = ex.exact(mesh.level_position(n, j), g.time(n));
    ub << ex.exact(0.0, g.time(n)), ex.exact(pi, g.time(n));
    h.u.push_back(u);
    h.boundary.push_back(ub);
  }
  EXPECT_EQ(max_error(h, ex.exact, mesh, d.layout), 0.0);
  EXPECT_EQ(max_error(h, ex.exact, mesh, d.layout, true), 0.0);
  for (auto& u : h.u) u.array() += 1e-3;
  EXPECT_NEAR(max_error(h, ex.exact, mesh, d.layout), 1e-3, 1e-15);
  // Level 0 is not counted.
  h.u[0].array() += 1.0;
  EXPECT_NEAR(max_error(h, ex.exact, mesh, d.layout), 1e-3, 1e-15);
  h.boundary[3][1] += 0.5;
  EXPECT_NEAR(max_error(h, ex.exact, mesh, d.layout), 1e-3, 1e-15);
  EXPECT_NEAR(max_error(h, ex.exact, mesh, d.layout, true), 0.5, 1e-12);
}

TEST(Problems, MidpointErrorQuartersWithTheStep) {
  RunConfig c;
  c.example = ExampleId::ex51_sin;
  c.m = 1;
  c.j_max = 1000;
  c.dt = 0.1;
  const double coarse = run(c).max_error;
  c.dt = 0.05;
  const double fine = run(c).max_error;
  EXPECT_GE(coarse / fine, 3.4);
  EXPECT_LE(coarse / fine, 4.6);
}

}  // namespace
