#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "mmfd/linops.hpp"

namespace mmfd {

/// Where Dirichlet data of eliminated boundary unknowns is enforced within a
/// collocation step.
enum class BoundaryEnforcement {
  gauss_points,         ///< boundary polynomial matches g at the Gauss points
  approximation_points  ///< boundary polynomial matches g at the rho~ nodes
};

/// Eliminated boundary unknowns u_b and their coupling to the interior rows.
///
/// The interior equations see `columns(t) * u_b(t)`. Each boundary value is
/// u_b = g + w (u[neighbor] - g), where w is `extrapolation_weight(t)`; an
/// empty weight evaluator means plain Dirichlet data (w = 0).
struct BoundaryCoupling {
  std::size_t count = 0;
  BoundaryEnforcement enforcement = BoundaryEnforcement::approximation_points;
  std::function<SparseMatrix(double)> columns;  ///< size x count
  std::function<Vector(double)> data;           ///< g at the boundary nodes
  std::function<Vector(double)> extrapolation_weight;
  std::vector<std::size_t> neighbor;  ///< interior index paired with each boundary unknown

  [[nodiscard]] bool extrapolated() const { return static_cast<bool>(extrapolation_weight); }

  [[nodiscard]] Vector weight(double t) const {
    return extrapolated() ? extrapolation_weight(t) : Vector(Vector::Zero(count));
  }

  /// Boundary values given the interior solution u at time t.
  [[nodiscard]] Vector values(double t, const Vector& u) const {
    Vector g = data(t);
    if (!extrapolated()) return g;
    const Vector w = extrapolation_weight(t);
    for (std::size_t b = 0; b < count; ++b) {
      g[b] += w[b] * (u[neighbor[b]] - g[b]);
    }
    return g;
  }
};

/// M(t) u' = A(t) u + f(t) with diagonal M, boundary values eliminated.
///
/// All evaluators must be pure: they may be called concurrently and in any
/// order. `dsqrtmass` is the exact time derivative of sqrt(M) (entrywise).
struct SemiDiscreteSystem {
  std::size_t size = 0;
  std::function<Vector(double)> mass;
  std::function<Vector(double)> dsqrtmass;
  std::function<SparseMatrix(double)> stiffness;
  std::function<Vector(double)> source;  ///< interior forcing, boundary data excluded
  std::optional<BoundaryCoupling> boundary;

  /// f(t) with Dirichlet data folded in pointwise at t.
  [[nodiscard]] Vector load(double t) const {
    Vector f = source(t);
    if (boundary && boundary->count > 0) f += boundary->columns(t) * boundary->data(t);
    return f;
  }

  /// Stiffness and load with the boundary relation imposed pointwise at t.
  /// Extrapolated boundary values move part of the coupling into A.
  [[nodiscard]] std::pair<SparseMatrix, Vector> pointwise_operator(double t) const {
    SparseMatrix a = stiffness(t);
    Vector f = source(t);
    if (!boundary || boundary->count == 0) return {std::move(a), std::move(f)};
    const SparseMatrix c = boundary->columns(t);
    const Vector g = boundary->data(t);
    if (!boundary->extrapolated()) {
      f += c * g;
      return {std::move(a), std::move(f)};
    }
    const Vector w = boundary->extrapolation_weight(t);
    Vector fixed = g;
    std::vector<Triplet> extra;
    for (int col = 0; col < c.outerSize(); ++col) {
      fixed[col] = (1.0 - w[col]) * g[col];
      for (SparseMatrix::InnerIterator it(c, col); it; ++it) {
        extra.emplace_back(it.row(), static_cast<int>(boundary->neighbor[col]), it.value() * w[col]);
      }
    }
    f += c * fixed;
    a += from_triplets(a.rows(), a.cols(), extra);
    return {std::move(a), std::move(f)};
  }
};

}  // namespace mmfd
