#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mmfd/discretization.hpp"
#include "mmfd/errors.hpp"
#include "mmfd/linops.hpp"
#include "mmfd/mesh2d.hpp"
#include "mmfd/problems.hpp"

namespace mmfd {

struct Options2D {
  /// Replaces the geometric-conservation J' at node (j, k). Only useful for
  /// demonstrating what goes wrong without it.
  std::function<double(std::size_t j, std::size_t k, double t)> jdot_override;
};

namespace detail {

/// Global node index -> interior or boundary slot (-1 when absent).
struct NodeMaps2D {
  std::vector<long> interior, boundary;
};

inline NodeMaps2D node_maps_2d(std::size_t jm, std::size_t km, NodeLayout& layout) {
  const std::size_t nodes = (jm + 1) * (km + 1);
  NodeMaps2D maps{std::vector<long>(nodes, -1), std::vector<long>(nodes, -1)};
  for (std::size_t k = 0; k <= km; ++k) {
    for (std::size_t j = 0; j <= jm; ++j) {
      const std::size_t node = k * (jm + 1) + j;
      if (j == 0 || k == 0 || j == jm || k == km) {
        maps.boundary[node] = static_cast<long>(layout.boundary.size());
        layout.boundary.push_back(node);
      }
    }
  }
  for (std::size_t k = 1; k < km; ++k) {
    for (std::size_t j = 1; j < jm; ++j) {
      const std::size_t node = k * (jm + 1) + j;
      maps.interior[node] = static_cast<long>(layout.interior.size());
      layout.interior.push_back(node);
    }
  }
  return maps;
}

struct Assembly2D {
  SparseMatrix stiffness;  ///< interior x interior
  SparseMatrix columns;    ///< interior x boundary
};

inline Assembly2D assemble_2d(const Problem2D& p, const MovingMesh2D& mesh, const NodeMaps2D& maps,
                              std::size_t n_interior, std::size_t n_boundary, const Options2D& opt,
                              double t) {
  const std::size_t jm = mesh.j_max(), km = mesh.k_max();
  const MeshSnapshot2D s = mesh.snapshot(t);
  std::vector<Triplet> ta, tc;
  ta.reserve(n_interior * 13);

  auto add = [&](std::size_t row_node, std::size_t col_node, double v) {
    const long r = maps.interior[row_node];
    if (r < 0) return;
    const long ci = maps.interior[col_node];
    if (ci >= 0) {
      ta.emplace_back(r, ci, v);
    } else {
      tc.emplace_back(r, maps.boundary[col_node], v);
    }
  };
  auto node = [&](std::size_t j, std::size_t k) { return s.index(j, k); };

  // Convective fluxes through the xi-faces (j-1/2, k): +q to row (j,k),
  // -q to row (j-1,k), q = W (u_{j,k} + u_{j-1,k}) / 2.
  for (std::size_t k = 1; k < km; ++k) {
    for (std::size_t j = 1; j <= jm; ++j) {
      const Metrics m = s.xi_face(j, k);
      const auto [xs, ys] = s.xi_face_speed(j, k);
      const double px = 0.5 * (s.x(j, k) + s.x(j - 1, k));
      const double py = 0.5 * (s.y(j, k) + s.y(j - 1, k));
      const double w = m.xi_x * (p.b1(px, py, t) - xs) + m.xi_y * (p.b2(px, py, t) - ys);
      for (std::size_t c : {node(j, k), node(j - 1, k)}) {
        add(node(j, k), c, 0.5 * w);
        add(node(j - 1, k), c, -0.5 * w);
      }
    }
  }
  for (std::size_t k = 1; k <= km; ++k) {
    for (std::size_t j = 1; j < jm; ++j) {
      const Metrics m = s.eta_face(j, k);
      const auto [xs, ys] = s.eta_face_speed(j, k);
      const double px = 0.5 * (s.x(j, k) + s.x(j, k - 1));
      const double py = 0.5 * (s.y(j, k) + s.y(j, k - 1));
      const double w = m.eta_x * (p.b1(px, py, t) - xs) + m.eta_y * (p.b2(px, py, t) - ys);
      for (std::size_t c : {node(j, k), node(j, k - 1)}) {
        add(node(j, k), c, 0.5 * w);
        add(node(j, k - 1), c, -0.5 * w);
      }
    }
  }

  // Diffusion: each cell (j-1/2, k-1/2) contributes the negative
  // semidefinite form -(a / 4J) [g11 (d_xi u)^2 + 2 g12 d_xi u d_eta u + g22 (d_eta u)^2].
  for (std::size_t k = 1; k <= km; ++k) {
    for (std::size_t j = 1; j <= jm; ++j) {
      const HalfHalfMetrics h = s.halfhalf(j, k);
      if (!(h.jacobian > 0.0)) {
        throw TangledMesh("nonpositive cell Jacobian at (" + std::to_string(j) + "-1/2," +
                              std::to_string(k) + "-1/2)",
                          t);
      }
      const double px = 0.25 * (s.x(j, k) + s.x(j - 1, k) + s.x(j, k - 1) + s.x(j - 1, k - 1));
      const double py = 0.25 * (s.y(j, k) + s.y(j - 1, k) + s.y(j, k - 1) + s.y(j - 1, k - 1));
      const double coef = p.a(px, py, t) / (2.0 * h.jacobian);
      const Metrics& g = h.metrics;
      const double g11 = g.xi_x * g.xi_x + g.xi_y * g.xi_y;
      const double g12 = g.xi_x * g.eta_x + g.xi_y * g.eta_y;
      const double g22 = g.eta_x * g.eta_x + g.eta_y * g.eta_y;
      const std::array<std::size_t, 4> corner{node(j, k), node(j - 1, k), node(j, k - 1),
                                              node(j - 1, k - 1)};
      constexpr std::array<double, 4> dxi{1.0, -1.0, 1.0, -1.0};
      constexpr std::array<double, 4> deta{1.0, 1.0, -1.0, -1.0};
      for (std::size_t r = 0; r < 4; ++r) {
        if (maps.interior[corner[r]] < 0) continue;
        for (std::size_t c = 0; c < 4; ++c) {
          const double v = dxi[r] * (g11 * dxi[c] + g12 * deta[c]) +
                           deta[r] * (g12 * dxi[c] + g22 * deta[c]);
          add(corner[r], corner[c], -0.5 * coef * v);
        }
      }
    }
  }

  for (std::size_t k = 1; k < km; ++k) {
    for (std::size_t j = 1; j < jm; ++j) {
      const double jac = s.jacobian(j, k);
      const double jdot = opt.jdot_override ? opt.jdot_override(j, k, t) : s.jacobian_dot(j, k);
      add(node(j, k), node(j, k), -jdot - p.c(s.x(j, k), s.y(j, k), t) * jac);
    }
  }

  return {from_triplets(static_cast<Eigen::Index>(n_interior),
                        static_cast<Eigen::Index>(n_interior), ta),
          from_triplets(static_cast<Eigen::Index>(n_interior),
                        static_cast<Eigen::Index>(n_boundary), tc)};
}

}  // namespace detail

/// Semi-discretization on a fixed-boundary 2D moving mesh. Interior unknowns
/// are ordered row-major with j fastest; every boundary node (corners
/// included) is eliminated.
inline Discretization build_system_2d(const Problem2D& problem, const MovingMesh2D& mesh,
                                      BcStrategy bc = BcStrategy::approximation_points,
                                      Options2D options = {}) {
  if (bc == BcStrategy::moving_domain_extrapolated) {
    throw InvalidConfig("2D discretization supports only fixed boundaries");
  }
  const std::size_t jm = mesh.j_max(), km = mesh.k_max();
  Discretization d;
  auto maps = std::make_shared<const detail::NodeMaps2D>(detail::node_maps_2d(jm, km, d.layout));
  auto m = std::make_shared<const MovingMesh2D>(mesh);
  auto p = std::make_shared<const Problem2D>(problem);
  auto opt = std::make_shared<const Options2D>(std::move(options));
  const std::size_t ni = d.layout.interior.size();
  const std::size_t nb = d.layout.boundary.size();
  const std::vector<std::size_t> interior = d.layout.interior;
  const std::vector<std::size_t> boundary = d.layout.boundary;

  auto nodal = [=](double t, auto&& fn) {
    const MeshSnapshot2D s = m->snapshot(t);
    Vector out(static_cast<Eigen::Index>(ni));
    for (std::size_t i = 0; i < ni; ++i) {
      const std::size_t jj = interior[i] % (jm + 1), kk = interior[i] / (jm + 1);
      out[static_cast<Eigen::Index>(i)] = fn(s, jj, kk);
    }
    return out;
  };

  SemiDiscreteSystem& sys = d.system;
  sys.size = ni;
  sys.mass = [=](double t) {
    return nodal(t, [](const MeshSnapshot2D& s, std::size_t j, std::size_t k) {
      return s.jacobian(j, k);
    });
  };
  sys.dsqrtmass = [=](double t) {
    return nodal(t, [&](const MeshSnapshot2D& s, std::size_t j, std::size_t k) {
      const double jac = s.jacobian(j, k);
      if (!(jac > 0.0)) throw DegenerateMesh(k * (jm + 1) + j, t, jac);
      const double jdot = opt->jdot_override ? opt->jdot_override(j, k, t) : s.jacobian_dot(j, k);
      return jdot / (2.0 * std::sqrt(jac));
    });
  };
  sys.stiffness = [=](double t) {
    return detail::assemble_2d(*p, *m, *maps, ni, nb, *opt, t).stiffness;
  };
  sys.source = [=](double t) {
    return nodal(t, [&](const MeshSnapshot2D& s, std::size_t j, std::size_t k) {
      return s.jacobian(j, k) * p->f(s.x(j, k), s.y(j, k), t);
    });
  };

  BoundaryCoupling coupling;
  coupling.count = nb;
  coupling.enforcement = bc == BcStrategy::gauss_points ? BoundaryEnforcement::gauss_points
                                                        : BoundaryEnforcement::approximation_points;
  coupling.columns = [=](double t) {
    return detail::assemble_2d(*p, *m, *maps, ni, nb, *opt, t).columns;
  };
  coupling.data = [=](double t) {
    Vector g(static_cast<Eigen::Index>(nb));
    for (std::size_t b = 0; b < nb; ++b) {
      const auto [x, y] = m->position(boundary[b] % (jm + 1), boundary[b] / (jm + 1), t);
      g[static_cast<Eigen::Index>(b)] = p->g(x, y, t);
    }
    return g;
  };
  sys.boundary = std::move(coupling);
  return d;
}

/// min over interior nodes of J c plus the discrete divergence of J grad(xi) . b:
/// nonnegative when convection and reaction are dissipative at time t.
inline double check_coef_condition_2d(const Problem2D& p, const MovingMesh2D& mesh, double t) {
  const MeshSnapshot2D s = mesh.snapshot(t);
  double worst = std::numeric_limits<double>::infinity();
  auto xi_flux = [&](std::size_t j, std::size_t k) {
    const Metrics m = s.xi_face(j, k);
    const double px = 0.5 * (s.x(j, k) + s.x(j - 1, k));
    const double py = 0.5 * (s.y(j, k) + s.y(j - 1, k));
    return m.xi_x * p.b1(px, py, t) + m.xi_y * p.b2(px, py, t);
  };
  auto eta_flux = [&](std::size_t j, std::size_t k) {
    const Metrics m = s.eta_face(j, k);
    const double px = 0.5 * (s.x(j, k) + s.x(j, k - 1));
    const double py = 0.5 * (s.y(j, k) + s.y(j, k - 1));
    return m.eta_x * p.b1(px, py, t) + m.eta_y * p.b2(px, py, t);
  };
  for (std::size_t k = 1; k < mesh.k_max(); ++k) {
    for (std::size_t j = 1; j < mesh.j_max(); ++j) {
      const double v = s.jacobian(j, k) * p.c(s.x(j, k), s.y(j, k), t) +
                       0.5 * (xi_flux(j + 1, k) - xi_flux(j, k)) +
                       0.5 * (eta_flux(j, k + 1) - eta_flux(j, k));
      worst = std::min(worst, v);
    }
  }
  return worst;
}

/// Interior initial data u0(x_{j,k}(0), y_{j,k}(0)) in layout order.
inline Vector initial_values_2d(const Problem2D& p, const MovingMesh2D& mesh,
                                const NodeLayout& layout) {
  Vector u(static_cast<Eigen::Index>(layout.interior.size()));
  const double t0 = mesh.grid().start();
  const std::size_t stride = mesh.j_max() + 1;
  for (std::size_t i = 0; i < layout.interior.size(); ++i) {
    const auto [x, y] = mesh.position(layout.interior[i] % stride, layout.interior[i] / stride, t0);
    u[static_cast<Eigen::Index>(i)] = p.u0(x, y);
  }
  return u;
}

}  // namespace mmfd
