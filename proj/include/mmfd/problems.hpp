#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "mmfd/discretization.hpp"
#include "mmfd/errors.hpp"
#include "mmfd/integrator.hpp"
#include "mmfd/mesh1d.hpp"
#include "mmfd/mesh2d.hpp"

namespace mmfd {

using Field1D = std::function<double(double x, double t)>;
using Field2D = std::function<double(double x, double y, double t)>;

/// u_t + (b u)_x + c u = (a u_x)_x + f on (x_l(t), x_r(t)), u = g on the
/// boundary, u = u0 at t = 0.
struct Problem1D {
  Field1D a, b, c, f, g;
  std::function<double(double)> u0;
  std::function<double(double)> x_left;
  std::function<double(double)> x_right;
  bool moving_domain = false;
  bool homogeneous = false;
};

/// 2D analogue on a fixed domain; b = (b1, b2).
struct Problem2D {
  Field2D a, b1, b2, c, f, g;
  std::function<double(double, double)> u0;
  bool homogeneous = false;
};

using MeshGenerator1D = std::function<MovingMesh1D(const TimeGrid&, std::size_t j_max)>;
using MeshGenerator2D =
    std::function<MovingMesh2D(const TimeGrid&, std::size_t j_max, std::size_t k_max)>;

struct Example1D {
  Problem1D problem;
  Field1D exact;
  MeshGenerator1D mesh;
  std::optional<BcStrategy> forced_bc;
};

struct Example2D {
  Problem2D problem;
  Field2D exact;
  MeshGenerator2D mesh;
};

enum class Variant51 { sin, cos };

/// Heat equation on (0, pi) with u = (2 + sin pi t) sin x (or cos x) and the
/// oscillating mesh x_j = j pi / J + sin(2 j pi / J) sin(omega t) / 4.
inline Example1D example_5_1(double omega, Variant51 variant) {
  constexpr double pi = std::numbers::pi;
  const bool use_sin = variant == Variant51::sin;
  auto shape = [use_sin](double x) { return use_sin ? std::sin(x) : std::cos(x); };
  Example1D ex;
  ex.exact = [shape](double x, double t) { return (2.0 + std::sin(pi * t)) * shape(x); };
  Problem1D& p = ex.problem;
  p.a = [](double, double) { return 1.0; };
  p.b = [](double, double) { return 0.0; };
  p.c = [](double, double) { return 0.0; };
  // f = u_t - u_xx
  p.f = [shape](double x, double t) {
    return pi * std::cos(pi * t) * shape(x) + (2.0 + std::sin(pi * t)) * shape(x);
  };
  if (use_sin) {
    p.g = [](double, double) { return 0.0; };
  } else {
    p.g = ex.exact;
  }
  p.u0 = [shape](double x) { return 2.0 * shape(x); };
  p.x_left = [](double) { return 0.0; };
  p.x_right = [](double) { return pi; };
  ex.mesh = [omega](const TimeGrid& grid, std::size_t j_max) {
    const double jm = static_cast<double>(j_max);
    return MovingMesh1D::sample(grid, j_max, [=](std::size_t j, double t) {
      const double s = static_cast<double>(j);
      return s * pi / jm + 0.25 * std::sin(2.0 * s * pi / jm) * std::sin(omega * t);
    });
  };
  return ex;
}

/// Heat equation on the moving interval x_l = (pi/3) sin(omega t),
/// x_r = pi - (pi/3) sin(omega t) with a mesh uniform between the ends.
inline Example1D example_5_2(double omega) {
  constexpr double pi = std::numbers::pi;
  auto xl = [omega](double t) { return pi / 3.0 * std::sin(omega * t); };
  auto xr = [omega](double t) { return pi - pi / 3.0 * std::sin(omega * t); };
  Example1D ex;
  ex.exact = [xl, xr](double x, double t) {
    const double w = xr(t) - xl(t);
    if (std::abs(w) < 1e-6) throw InvalidConfig("example 5.2: degenerate domain");
    return std::sin(pi * (x - xl(t)) / w) * (2.0 + std::sin(pi * t));
  };
  Problem1D& p = ex.problem;
  p.a = [](double, double) { return 1.0; };
  p.b = [](double, double) { return 0.0; };
  p.c = [](double, double) { return 0.0; };
  p.f = [omega, xl, xr](double x, double t) {
    const double w = xr(t) - xl(t);
    const double dxl = pi / 3.0 * omega * std::cos(omega * t);
    const double dw = -2.0 * dxl;
    const double s = (x - xl(t)) / w;
    const double ds = (-dxl * w - (x - xl(t)) * dw) / (w * w);
    const double amp = 2.0 + std::sin(pi * t);
    const double u = std::sin(pi * s) * amp;
    const double ut = std::cos(pi * s) * pi * ds * amp + std::sin(pi * s) * pi * std::cos(pi * t);
    const double uxx = -(pi / w) * (pi / w) * u;
    return ut - uxx;
  };
  p.g = [](double, double) { return 0.0; };
  p.u0 = [](double x) { return 2.0 * std::sin(x); };
  p.x_left = xl;
  p.x_right = xr;
  p.moving_domain = true;
  ex.mesh = [xl, xr](const TimeGrid& grid, std::size_t j_max) {
    const double jm = static_cast<double>(j_max);
    return MovingMesh1D::sample(grid, j_max, [=](std::size_t j, double t) {
      if (j == j_max) return xr(t);
      return xl(t) + static_cast<double>(j) / jm * (xr(t) - xl(t));
    });
  };
  ex.forced_bc = BcStrategy::moving_domain_extrapolated;
  return ex;
}

/// Heat equation on (0, pi)^2 with u = (2 + sin pi t) sin x sin y on the mesh
/// x = xi + 0.2 s, y = eta + 0.2 s, s = sin 2xi sin 2eta sin omega t.
inline Example2D example_5_3(double omega) {
  constexpr double pi = std::numbers::pi;
  Example2D ex;
  ex.exact = [](double x, double y, double t) {
    return (2.0 + std::sin(pi * t)) * std::sin(x) * std::sin(y);
  };
  Problem2D& p = ex.problem;
  p.a = [](double, double, double) { return 1.0; };
  p.b1 = [](double, double, double) { return 0.0; };
  p.b2 = [](double, double, double) { return 0.0; };
  p.c = [](double, double, double) { return 0.0; };
  p.f = [](double x, double y, double t) {
    return pi * std::cos(pi * t) * std::sin(x) * std::sin(y) +
           2.0 * (2.0 + std::sin(pi * t)) * std::sin(x) * std::sin(y);
  };
  p.g = [](double, double, double) { return 0.0; };
  p.u0 = [](double x, double y) { return 2.0 * std::sin(x) * std::sin(y); };
  ex.mesh = [omega](const TimeGrid& grid, std::size_t j_max, std::size_t k_max) {
    const double jm = static_cast<double>(j_max);
    const double km = static_cast<double>(k_max);
    return MovingMesh2D::sample(grid, j_max, k_max, [=](std::size_t j, std::size_t k, double t) {
      const double xi = pi * static_cast<double>(j) / jm;
      const double eta = pi * static_cast<double>(k) / km;
      // Boundary nodes stay put: sin(2 xi) sin(2 eta) vanishes there.
      const bool edge = j == 0 || k == 0 || j == j_max || k == k_max;
      const double d =
          edge ? 0.0 : 0.2 * std::sin(2.0 * xi) * std::sin(2.0 * eta) * std::sin(omega * t);
      return std::pair{xi + d, eta + d};
    });
  };
  return ex;
}

/// Zero source and boundary data; initial data unchanged.
inline Problem1D homogeneous_variant(Problem1D p) {
  p.f = [](double, double) { return 0.0; };
  p.g = [](double, double) { return 0.0; };
  p.homogeneous = true;
  return p;
}

inline Problem2D homogeneous_variant(Problem2D p) {
  p.f = [](double, double, double) { return 0.0; };
  p.g = [](double, double, double) { return 0.0; };
  p.homogeneous = true;
  return p;
}

/// Max |u_j^n - u_exact(x_j^n, t_n)| over interior nodes and levels n >= 1.
/// Boundary nodes are added on request: their values come from how the
/// boundary condition was enforced and may drift from g.
inline double max_error(const SolutionHistory& history, const Field1D& exact,
                        const MovingMesh1D& mesh, const NodeLayout& layout,
                        bool include_boundary = false) {
  double err = 0.0;
  for (std::size_t n = 1; n < history.u.size(); ++n) {
    const double t = history.grid.time(n);
    for (std::size_t i = 0; i < layout.interior.size(); ++i) {
      const double x = mesh.level_position(n, layout.interior[i]);
      err = std::max(err, std::abs(history.u[n][static_cast<Eigen::Index>(i)] - exact(x, t)));
    }
    if (include_boundary && history.boundary[n].size() > 0) {
      for (std::size_t b = 0; b < layout.boundary.size(); ++b) {
        const double x = mesh.level_position(n, layout.boundary[b]);
        err = std::max(err,
                       std::abs(history.boundary[n][static_cast<Eigen::Index>(b)] - exact(x, t)));
      }
    }
  }
  return err;
}

inline double max_error(const SolutionHistory& history, const Field2D& exact,
                        const MovingMesh2D& mesh, const NodeLayout& layout,
                        bool include_boundary = false) {
  const std::size_t stride = mesh.j_max() + 1;
  auto coords = [&](std::size_t n, std::size_t node) {
    return std::pair{mesh.level_x(n, node % stride, node / stride),
                     mesh.level_y(n, node % stride, node / stride)};
  };
  double err = 0.0;
  for (std::size_t n = 1; n < history.u.size(); ++n) {
    const double t = history.grid.time(n);
    for (std::size_t i = 0; i < layout.interior.size(); ++i) {
      const auto [x, y] = coords(n, layout.interior[i]);
      err = std::max(err, std::abs(history.u[n][static_cast<Eigen::Index>(i)] - exact(x, y, t)));
    }
    if (include_boundary && history.boundary[n].size() > 0) {
      for (std::size_t b = 0; b < layout.boundary.size(); ++b) {
        const auto [x, y] = coords(n, layout.boundary[b]);
        err = std::max(
            err, std::abs(history.boundary[n][static_cast<Eigen::Index>(b)] - exact(x, y, t)));
      }
    }
  }
  return err;
}

}  // namespace mmfd
