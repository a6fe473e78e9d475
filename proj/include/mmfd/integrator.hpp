#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmfd/errors.hpp"
#include "mmfd/linops.hpp"
#include "mmfd/quadrature.hpp"
#include "mmfd/system.hpp"
#include "mmfd/time_grid.hpp"

namespace mmfd {

/// B = sqrt(M)^-1 (A + sqrt(M) d sqrt(M)/dt) sqrt(M)^-1 for a given A.
inline SparseMatrix transformed_operator(const SparseMatrix& a, const Vector& sqrt_mass,
                                         const Vector& dsqrt_mass) {
  const Vector inv = sqrt_mass.cwiseInverse();
  SparseMatrix b = a;
  for (int k = 0; k < b.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(b, k); it; ++it) {
      it.valueRef() *= inv[it.row()] * inv[it.col()];
    }
  }
  // Diagonal term sqrt(M)^-1 (sqrt(M) dsqrt(M)) sqrt(M)^-1 = dsqrt(M) / sqrt(M).
  std::vector<Triplet> diag;
  diag.reserve(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) diag.emplace_back(i, i, dsqrt_mass[i] * inv[i]);
  b += from_triplets(a.rows(), a.cols(), diag);
  return b;
}

/// sqrt(M(t)), checking positivity of the mass.
inline Vector sqrt_mass_at(const SemiDiscreteSystem& sys, double t) {
  Vector mass = sys.mass(t);
  require_positive_mass(mass, t);
  return mass.array().sqrt().matrix();
}

inline SparseMatrix assemble_B(const SemiDiscreteSystem& sys, double t) {
  const Vector s = sqrt_mass_at(sys, t);
  return transformed_operator(sys.stiffness(t), s, sys.dsqrtmass(t));
}

/// max eig of the symmetric part of A + sqrt(M) dsqrt(M)/dt at each time.
inline std::vector<double> certify_dissipativity(const SemiDiscreteSystem& sys,
                                                 const std::vector<double>& times) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    const Vector s = sqrt_mass_at(sys, t);
    const Vector ds = sys.dsqrtmass(t);
    SparseMatrix c = sys.stiffness(t);
    std::vector<Triplet> diag;
    for (Eigen::Index i = 0; i < c.rows(); ++i) diag.emplace_back(i, i, s[i] * ds[i]);
    c += from_triplets(c.rows(), c.cols(), diag);
    out.push_back(max_symmetric_eig(c));
  }
  return out;
}

/// Certificate tolerance: 1e-9 scaled by the largest stiffness entry.
inline double certificate_tolerance(const SparseMatrix& stiffness) {
  return 1e-9 * std::max(1.0, max_abs_entry(stiffness));
}

/// One backward Euler step of v' = B v + sqrt(M)^-1 f.
inline Vector step_backward_euler(const SemiDiscreteSystem& sys, double t_n, double dt,
                                  const Vector& v_n) {
  if (!(dt > 0.0)) throw InvalidConfig("time step must be positive");
  const double t = t_n + dt;
  const Vector s = sqrt_mass_at(sys, t);
  auto [a, f] = sys.pointwise_operator(t);
  const SparseMatrix b = transformed_operator(a, s, sys.dsqrtmass(t));
  const SparseMatrix lhs = sparse_identity(b.rows()) - dt * b;
  const Vector rhs = v_n + dt * s.cwiseInverse().cwiseProduct(f);
  try {
    return solve_sparse(lhs, rhs);
  } catch (const SingularSystem& e) {
    throw StepFailure(0, e.what());
  }
}

struct CollocationStep {
  Vector v_next;
  std::vector<Vector> stages;  ///< v~_{n,0..m}
  Vector boundary_next;        ///< eliminated boundary values at t_{n+1}
};

/// One m-point Gauss-Legendre collocation step of v' = B v + sqrt(M)^-1 f.
///
/// Unknowns are the stage values v~_{n,1..m} at the rho~ nodes, stacked
/// stage-major. `boundary_n` holds the eliminated boundary values at t_n
/// (ignored when the system has no boundary coupling).
inline CollocationStep step_collocation(const SemiDiscreteSystem& sys,
                                        const CollocationScheme& scheme, double t_n, double dt,
                                        const Vector& v_n, const Vector& boundary_n = Vector(),
                                        std::size_t step_index = 0) {
  if (!(dt > 0.0)) throw InvalidConfig("time step must be positive");
  const int m = scheme.m;
  const auto l = static_cast<Eigen::Index>(sys.size);
  if (v_n.size() != l) throw DimensionMismatch("step_collocation: state length mismatch");

  const BoundaryCoupling* bc =
      (sys.boundary && sys.boundary->count > 0) ? &*sys.boundary : nullptr;
  const bool gauss_bc = bc && bc->enforcement == BoundaryEnforcement::gauss_points;
  const bool approx_bc = bc && bc->enforcement == BoundaryEnforcement::approximation_points;
  if (bc && boundary_n.size() != static_cast<Eigen::Index>(bc->count)) {
    throw DimensionMismatch("step_collocation: boundary state length mismatch");
  }

  // Quantities at the interpolation nodes, needed for approximation-point
  // enforcement: sqrt(M), Dirichlet data and extrapolation weights.
  std::vector<Vector> tilde_sqrt_mass(static_cast<std::size_t>(m + 1));
  std::vector<Vector> tilde_fixed(static_cast<std::size_t>(m + 1));
  std::vector<Vector> tilde_weight(static_cast<std::size_t>(m + 1));
  if (approx_bc) {
    for (int k = 1; k <= m; ++k) {
      const double tk = t_n + scheme.rho_tilde[k] * dt;
      const Vector g = bc->data(tk);
      const Vector w = bc->weight(tk);
      tilde_weight[k] = w;
      tilde_fixed[k] = (Vector::Ones(w.size()) - w).cwiseProduct(g);
      if (bc->extrapolated()) tilde_sqrt_mass[k] = sqrt_mass_at(sys, tk);
    }
  }

  const Eigen::Index n_unknowns = l * m;
  std::vector<Triplet> triplets;
  Vector rhs = Vector::Zero(n_unknowns);
  std::vector<Vector> gauss_boundary_fixed(static_cast<std::size_t>(m));

  for (int j = 0; j < m; ++j) {
    const double tj = t_n + scheme.rho[j] * dt;
    const Vector s = sqrt_mass_at(sys, tj);
    const Vector s_inv = s.cwiseInverse();
    SparseMatrix a;
    Vector f;
    if (gauss_bc) {
      auto op = sys.pointwise_operator(tj);
      a = std::move(op.first);
      f = std::move(op.second);
      Vector g = bc->data(tj);
      gauss_boundary_fixed[j] = (Vector::Ones(g.size()) - bc->weight(tj)).cwiseProduct(g);
    } else {
      a = sys.stiffness(tj);
      f = sys.source(tj);
    }
    const SparseMatrix b = transformed_operator(a, s, sys.dsqrtmass(tj));

    Vector r = s_inv.cwiseProduct(f) - (scheme.D(j, 0) / dt) * v_n + scheme.L(j, 0) * (b * v_n);

    SparseMatrix c;
    if (approx_bc) {
      c = bc->columns(tj);
      Vector known = scheme.L(j, 0) * boundary_n;
      for (int k = 1; k <= m; ++k) known += scheme.L(j, k) * tilde_fixed[k];
      r += s_inv.cwiseProduct(c * known);
    }
    rhs.segment(j * l, l) = r;

    for (int k = 1; k <= m; ++k) {
      const Eigen::Index row0 = j * l;
      const Eigen::Index col0 = (k - 1) * l;
      const double dcoef = scheme.D(j, k) / dt;
      const double lcoef = scheme.L(j, k);
      for (Eigen::Index i = 0; i < l; ++i) triplets.emplace_back(row0 + i, col0 + i, dcoef);
      for (int outer = 0; outer < b.outerSize(); ++outer) {
        for (SparseMatrix::InnerIterator it(b, outer); it; ++it) {
          triplets.emplace_back(row0 + it.row(), col0 + it.col(), -lcoef * it.value());
        }
      }
      if (approx_bc && bc->extrapolated()) {
        for (int col = 0; col < c.outerSize(); ++col) {
          const double wk = tilde_weight[k][col];
          if (wk == 0.0) continue;
          const std::size_t nb = bc->neighbor[col];
          for (SparseMatrix::InnerIterator it(c, col); it; ++it) {
            triplets.emplace_back(row0 + it.row(), col0 + static_cast<Eigen::Index>(nb),
                                  -s_inv[it.row()] * it.value() * lcoef * wk /
                                      tilde_sqrt_mass[k][nb]);
          }
        }
      }
    }
  }

  const SparseMatrix lhs = from_triplets(n_unknowns, n_unknowns, triplets);
  Vector x;
  try {
    x = solve_sparse(lhs, rhs);
  } catch (const SingularSystem& e) {
    throw StepFailure(step_index, e.what());
  }

  CollocationStep out;
  out.stages.reserve(static_cast<std::size_t>(m + 1));
  out.stages.push_back(v_n);
  for (int k = 1; k <= m; ++k) out.stages.push_back(x.segment((k - 1) * l, l));
  out.v_next = out.stages.back();

  if (bc) {
    const double t_next = t_n + dt;
    if (approx_bc) {
      const Vector s_next = sqrt_mass_at(sys, t_next);
      out.boundary_next = bc->values(t_next, s_next.cwiseInverse().cwiseProduct(out.v_next));
    } else {
      // The boundary polynomial passes through the step-start value and the
      // values imposed at the Gauss points; its end value is extrapolated.
      Vector ub = scheme.gauss_extrapolation[0] * boundary_n;
      for (int j = 0; j < m; ++j) {
        const double tj = t_n + scheme.rho[j] * dt;
        Vector value = gauss_boundary_fixed[j];
        if (bc->extrapolated()) {
          Vector vh = Vector::Zero(l);
          for (int k = 0; k <= m; ++k) vh += scheme.L(j, k) * out.stages[k];
          const Vector uh = sqrt_mass_at(sys, tj).cwiseInverse().cwiseProduct(vh);
          const Vector w = bc->weight(tj);
          for (std::size_t b = 0; b < bc->count; ++b) value[b] += w[b] * uh[bc->neighbor[b]];
        }
        ub += scheme.gauss_extrapolation[j + 1] * value;
      }
      out.boundary_next = ub;
    }
  }
  return out;
}

/// Boundary values seen by the interior rows at Gauss time t_n + rho_j dt.
///
/// `stages` are the step's v~_{n,0..m}; they are only read when the boundary
/// is extrapolated from interior neighbors.
inline Vector stage_boundary_values(const SemiDiscreteSystem& sys, const CollocationScheme& scheme,
                                    double t_n, double dt, int j, const Vector& boundary_n,
                                    const std::vector<Vector>& stages = {}) {
  if (!sys.boundary || sys.boundary->count == 0) return {};
  if (j < 0 || j >= scheme.m) throw OutOfRange("stage index " + std::to_string(j));
  const BoundaryCoupling& bc = *sys.boundary;
  const auto m = static_cast<std::size_t>(scheme.m);
  if (bc.extrapolated() && stages.size() != m + 1) {
    throw InvalidConfig("stage_boundary_values: extrapolated boundary needs the step's stages");
  }
  auto interior_at = [&](double t, const Vector& v) {
    return sqrt_mass_at(sys, t).cwiseInverse().cwiseProduct(v);
  };
  const double tj = t_n + scheme.rho[j] * dt;
  if (bc.enforcement == BoundaryEnforcement::gauss_points) {
    if (!bc.extrapolated()) return bc.data(tj);
    Vector vh = Vector::Zero(stages.front().size());
    for (std::size_t k = 0; k <= m; ++k) vh += scheme.L(j, static_cast<int>(k)) * stages[k];
    return bc.values(tj, interior_at(tj, vh));
  }
  Vector out = scheme.L(j, 0) * boundary_n;
  for (int k = 1; k <= scheme.m; ++k) {
    const double tk = t_n + scheme.rho_tilde[k] * dt;
    const Vector ub = bc.extrapolated()
                          ? bc.values(tk, interior_at(tk, stages[static_cast<std::size_t>(k)]))
                          : bc.data(tk);
    out += scheme.L(j, k) * ub;
  }
  return out;
}

enum class TimeMethod { collocation, backward_euler };

struct IntegrateOptions {
  TimeMethod method = TimeMethod::collocation;
  bool monitor = false;       ///< check the energy inequality step by step
  bool homogeneous = false;   ///< caller's declaration that f = 0 and g = 0
  bool keep_stages = false;
  double energy_tolerance = 1e-12;
};

struct SolutionHistory {
  TimeGrid grid;
  std::vector<Vector> u;         ///< interior solution per level
  std::vector<Vector> boundary;  ///< eliminated boundary values per level
  std::vector<double> energy;    ///< (v^n)^T v^n
  std::vector<std::vector<Vector>> stages;
  std::vector<std::size_t> energy_violations;  ///< steps n with E_{n+1} > E_n (1 + tol)

  /// True when no energy increase was recorded.
  [[nodiscard]] bool energy_monotone() const { return energy_violations.empty(); }
};

/// Integrates M u' = A u + f from u(0) = u0 over the grid.
inline SolutionHistory integrate(const SemiDiscreteSystem& sys, const TimeGrid& grid,
                                 const CollocationScheme& scheme, const Vector& u0,
                                 const IntegrateOptions& options = {}) {
  if (u0.size() != static_cast<Eigen::Index>(sys.size)) {
    throw DimensionMismatch("integrate: initial data length mismatch");
  }
  SolutionHistory hist{grid, {}, {}, {}, {}, {}};
  hist.u.reserve(grid.levels());
  hist.energy.reserve(grid.levels());

  const double t0 = grid.start();
  Vector v = sqrt_mass_at(sys, t0).cwiseProduct(u0);
  Vector ub;
  if (sys.boundary && sys.boundary->count > 0) ub = sys.boundary->values(t0, u0);
  hist.u.push_back(u0);
  hist.boundary.push_back(ub);
  hist.energy.push_back(v.squaredNorm());

  for (std::size_t n = 0; n < grid.steps(); ++n) {
    const double tn = grid.time(n);
    const double dt = grid.step(n);
    Vector v_next;
    if (options.method == TimeMethod::backward_euler) {
      try {
        v_next = step_backward_euler(sys, tn, dt, v);
      } catch (const StepFailure& e) {
        throw StepFailure(n, e.what());
      }
      if (sys.boundary && sys.boundary->count > 0) {
        const Vector s = sqrt_mass_at(sys, tn + dt);
        ub = sys.boundary->values(tn + dt, s.cwiseInverse().cwiseProduct(v_next));
      }
    } else {
      CollocationStep step = step_collocation(sys, scheme, tn, dt, v, ub, n);
      v_next = std::move(step.v_next);
      ub = std::move(step.boundary_next);
      if (options.keep_stages) hist.stages.push_back(std::move(step.stages));
    }
    const double e_prev = hist.energy.back();
    const double e_next = v_next.squaredNorm();
    if (options.monitor && options.homogeneous &&
        e_next > e_prev * (1.0 + options.energy_tolerance)) {
      hist.energy_violations.push_back(n);
    }
    v = std::move(v_next);
    const Vector s = sqrt_mass_at(sys, grid.time(n + 1));
    hist.u.push_back(s.cwiseInverse().cwiseProduct(v));
    hist.boundary.push_back(ub);
    hist.energy.push_back(e_next);
  }
  return hist;
}

}  // namespace mmfd
