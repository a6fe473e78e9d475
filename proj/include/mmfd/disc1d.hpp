#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "mmfd/discretization.hpp"
#include "mmfd/errors.hpp"
#include "mmfd/linops.hpp"
#include "mmfd/mesh1d.hpp"
#include "mmfd/problems.hpp"

namespace mmfd {

enum class Scheme1D {
  conservative,              ///< flux form with h' and (b - x') half-point fluxes
  nonconservative_halfpoint, ///< x' u_x split over the two half points
  twocell                    ///< x' u_x as a centered difference over two cells
};

/// Condition violation of the two-cell scheme: node j on time interval n.
struct Cond2Violation {
  std::size_t j;
  std::size_t interval;
};

namespace detail {

/// Coefficients of u_{j-1}, u_j, u_{j+1} in row j of A, plus M_j and
/// d sqrt(M_j)/dt, for every interior node at one time.
struct Stencil1D {
  std::vector<std::array<double, 3>> row;
  std::vector<double> mass, dsqrtmass, x;
};

inline Stencil1D stencil_1d(Scheme1D scheme, const Problem1D& p, const MovingMesh1D& mesh,
                            double t) {
  const std::vector<double> x = mesh.positions(t);
  const std::vector<double> xd = mesh.speeds(t);
  const std::size_t jm = x.size() - 1;
  Stencil1D s;
  s.row.resize(jm - 1);
  s.mass.resize(jm - 1);
  s.dsqrtmass.resize(jm - 1);
  s.x = x;
  for (std::size_t j = 1; j < jm; ++j) {
    const double hp = x[j + 1] - x[j];
    const double hm = x[j] - x[j - 1];
    if (!(hp > 0.0)) throw TangledMesh("cell " + std::to_string(j + 1), t);
    if (!(hm > 0.0)) throw TangledMesh("cell " + std::to_string(j), t);
    const double mid_p = 0.5 * (x[j] + x[j + 1]);
    const double mid_m = 0.5 * (x[j - 1] + x[j]);
    const double ap = p.a(mid_p, t), am = p.a(mid_m, t);
    const double bp = p.b(mid_p, t), bm = p.b(mid_m, t);
    const double xdp = 0.5 * (xd[j] + xd[j + 1]);
    const double xdm = 0.5 * (xd[j - 1] + xd[j]);
    const double hdp = xd[j + 1] - xd[j];
    const double hdm = xd[j] - xd[j - 1];
    const double mj = 0.5 * (hp + hm);
    const double cj = p.c(x[j], t);

    double lo = 0.0, di = 0.0, up = 0.0;
    switch (scheme) {
      case Scheme1D::conservative: {
        const double wp = 0.5 * (bp - xdp);
        const double wm = 0.5 * (bm - xdm);
        up = ap / hp - wp;
        lo = am / hm + wm;
        di = -ap / hp - am / hm - 0.5 * (hdp + hdm) - mj * cj - wp + wm;
        break;
      }
      case Scheme1D::nonconservative_halfpoint: {
        // a (u_{j+1}-u_j)/h - a (u_j-u_{j-1})/h
        up += ap / hp;
        di -= ap / hp + am / hm;
        lo += am / hm;
        // x'_{j+1/2} (u_{j+1}-u_j)/2 + x'_{j-1/2} (u_j-u_{j-1})/2
        up += 0.5 * xdp;
        di += 0.5 * (xdm - xdp);
        lo -= 0.5 * xdm;
        // -b_{j+1/2} (u_{j+1}+u_j)/2 + b_{j-1/2} (u_j+u_{j-1})/2
        up -= 0.5 * bp;
        di += 0.5 * (bm - bp);
        lo += 0.5 * bm;
        di -= mj * cj;
        break;
      }
      case Scheme1D::twocell: {
        up = ap / hp + 0.5 * xd[j] - 0.5 * bp;
        lo = am / hm - 0.5 * xd[j] + 0.5 * bm;
        di = -ap / hp - am / hm + 0.5 * (bm - bp) - mj * cj;
        break;
      }
    }
    s.row[j - 1] = {lo, di, up};
    s.mass[j - 1] = mj;
    s.dsqrtmass[j - 1] =
        std::numbers::sqrt2 / 4.0 * (hdp + hdm) / std::sqrt(hp + hm);
  }
  return s;
}

inline double extrapolation_weight(double node, double neighbor, double edge, double width) {
  if (std::abs(neighbor - edge) <= 1e-12 * std::abs(width)) {
    throw DegenerateExtrapolation("boundary neighbor coincides with the domain edge");
  }
  return (node - edge) / (neighbor - edge);
}

}  // namespace detail

/// Cells j = 1..J where the two-cell scheme's mesh-speed condition
/// x'_j - x'_{j-1} <= 4 a_{j-1/2} / h_j fails at either end of an interval.
inline std::vector<Cond2Violation> check_twocell_condition(const Problem1D& p,
                                                           const MovingMesh1D& mesh) {
  std::vector<Cond2Violation> out;
  const TimeGrid& grid = mesh.grid();
  for (std::size_t n = 0; n < grid.steps(); ++n) {
    for (std::size_t j = 1; j <= mesh.j_max(); ++j) {
      const double jump = mesh.speed(j, n) - mesh.speed(j - 1, n);
      bool bad = false;
      for (std::size_t level : {n, n + 1}) {
        const double xa = mesh.level_position(level, j - 1);
        const double xb = mesh.level_position(level, j);
        const double a = p.a(0.5 * (xa + xb), grid.time(level));
        if (jump > 4.0 * a / (xb - xa)) bad = true;
      }
      if (bad) out.push_back({j, n});
    }
  }
  return out;
}

/// min_j c_j + (b_{j+1/2} - b_{j-1/2}) / (h_{j+1} + h_j): nonnegative when
/// the convection and reaction terms are dissipative at time t.
inline double check_coef_condition_1d(const Problem1D& p, const MovingMesh1D& mesh, double t) {
  const std::vector<double> x = mesh.positions(t);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j + 1 < x.size(); ++j) {
    const double bp = p.b(0.5 * (x[j] + x[j + 1]), t);
    const double bm = p.b(0.5 * (x[j - 1] + x[j]), t);
    const double mj = 0.5 * (x[j + 1] - x[j - 1]);
    worst = std::min(worst, p.c(x[j], t) + 0.5 * (bp - bm) / mj);
  }
  return worst;
}

/// Semi-discretization of a 1D problem on a moving mesh. The unknowns are
/// u_1..u_{J-1}; u_0 and u_J are eliminated through the boundary coupling.
inline Discretization build_system_1d(Scheme1D scheme, const Problem1D& problem,
                                      const MovingMesh1D& mesh,
                                      BcStrategy bc = BcStrategy::approximation_points) {
  const std::size_t jm = mesh.j_max();
  if (jm < 2) throw InvalidConfig("1D discretization needs J >= 2");
  const std::size_t l = jm - 1;
  auto m = std::make_shared<const MovingMesh1D>(mesh);
  auto p = std::make_shared<const Problem1D>(problem);

  Discretization d;
  for (std::size_t j = 1; j < jm; ++j) d.layout.interior.push_back(j);
  d.layout.boundary = {0, jm};

  SemiDiscreteSystem& sys = d.system;
  sys.size = l;
  sys.mass = [=](double t) {
    const std::vector<double> x = m->positions(t);
    Vector out(static_cast<Eigen::Index>(l));
    for (std::size_t j = 1; j < jm; ++j) out[static_cast<Eigen::Index>(j - 1)] = 0.5 * (x[j + 1] - x[j - 1]);
    return out;
  };
  sys.dsqrtmass = [=](double t) {
    const detail::Stencil1D s = detail::stencil_1d(scheme, *p, *m, t);
    return Vector(Eigen::Map<const Vector>(s.dsqrtmass.data(), static_cast<Eigen::Index>(l)));
  };
  sys.stiffness = [=](double t) {
    const detail::Stencil1D s = detail::stencil_1d(scheme, *p, *m, t);
    std::vector<Triplet> tr;
    tr.reserve(3 * l);
    for (std::size_t i = 0; i < l; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      if (i > 0) tr.emplace_back(ii, ii - 1, s.row[i][0]);
      tr.emplace_back(ii, ii, s.row[i][1]);
      if (i + 1 < l) tr.emplace_back(ii, ii + 1, s.row[i][2]);
    }
    return from_triplets(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l), tr);
  };
  sys.source = [=](double t) {
    const std::vector<double> x = m->positions(t);
    Vector out(static_cast<Eigen::Index>(l));
    for (std::size_t j = 1; j < jm; ++j) {
      out[static_cast<Eigen::Index>(j - 1)] = 0.5 * (x[j + 1] - x[j - 1]) * p->f(x[j], t);
    }
    return out;
  };

  BoundaryCoupling coupling;
  coupling.count = 2;
  coupling.enforcement = bc == BcStrategy::gauss_points ? BoundaryEnforcement::gauss_points
                                                        : BoundaryEnforcement::approximation_points;
  coupling.columns = [=](double t) {
    const detail::Stencil1D s = detail::stencil_1d(scheme, *p, *m, t);
    const auto last = static_cast<Eigen::Index>(l - 1);
    return from_triplets(static_cast<Eigen::Index>(l), 2,
                         {Triplet(0, 0, s.row.front()[0]), Triplet(last, 1, s.row.back()[2])});
  };
  coupling.data = [=](double t) {
    Vector g(2);
    g << p->g(p->x_left(t), t), p->g(p->x_right(t), t);
    return g;
  };
  coupling.neighbor = {0, l - 1};
  if (bc == BcStrategy::moving_domain_extrapolated) {
    coupling.extrapolation_weight = [=](double t) {
      const double xl = p->x_left(t), xr = p->x_right(t);
      const double w = xr - xl;
      Vector k(2);
      k << detail::extrapolation_weight(m->position(0, t), m->position(1, t), xl, w),
          detail::extrapolation_weight(m->position(jm, t), m->position(jm - 1, t), xr, w);
      return k;
    };
  }
  sys.boundary = std::move(coupling);

  if (scheme == Scheme1D::twocell) {
    for (const Cond2Violation& v : check_twocell_condition(problem, mesh)) {
      d.warnings.push_back("two-cell mesh-speed condition fails at j=" + std::to_string(v.j) +
                           " on interval " + std::to_string(v.interval));
    }
  }
  return d;
}

inline Discretization build_conservative(const Problem1D& p, const MovingMesh1D& mesh,
                                         BcStrategy bc = BcStrategy::approximation_points) {
  return build_system_1d(Scheme1D::conservative, p, mesh, bc);
}

inline Discretization build_nonconservative_halfpoint(
    const Problem1D& p, const MovingMesh1D& mesh,
    BcStrategy bc = BcStrategy::approximation_points) {
  return build_system_1d(Scheme1D::nonconservative_halfpoint, p, mesh, bc);
}

inline Discretization build_twocell(const Problem1D& p, const MovingMesh1D& mesh,
                                    BcStrategy bc = BcStrategy::approximation_points) {
  return build_system_1d(Scheme1D::twocell, p, mesh, bc);
}

/// Interior initial data u0(x_j(0)).
inline Vector initial_values_1d(const Problem1D& p, const MovingMesh1D& mesh) {
  Vector u(static_cast<Eigen::Index>(mesh.j_max() - 1));
  const double t0 = mesh.grid().start();
  for (std::size_t j = 1; j < mesh.j_max(); ++j) {
    u[static_cast<Eigen::Index>(j - 1)] = p.u0(mesh.position(j, t0));
  }
  return u;
}

}  // namespace mmfd
