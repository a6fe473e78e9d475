#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mmfd/errors.hpp"
#include "mmfd/system.hpp"

namespace mmfd {

/// How Dirichlet data is imposed within a collocation step.
enum class BcStrategy {
  gauss_points,          ///< at the Gauss collocation points
  approximation_points,  ///< at the interpolation nodes rho~ (reaches t_{n+1})
  moving_domain_extrapolated  ///< linear extrapolation to the moving boundary, at rho~
};

inline std::string_view to_string(BcStrategy bc) {
  switch (bc) {
    case BcStrategy::gauss_points: return "gauss";
    case BcStrategy::approximation_points: return "approx";
    case BcStrategy::moving_domain_extrapolated: return "extrap";
  }
  return "?";
}

inline BcStrategy parse_bc_strategy(std::string_view s) {
  if (s == "gauss") return BcStrategy::gauss_points;
  if (s == "approx") return BcStrategy::approximation_points;
  if (s == "extrap") return BcStrategy::moving_domain_extrapolated;
  throw InvalidConfig("unknown boundary strategy '" + std::string(s) + "'");
}

/// Maps system unknowns and eliminated boundary unknowns to mesh node indices.
struct NodeLayout {
  std::vector<std::size_t> interior;
  std::vector<std::size_t> boundary;
};

/// A SemiDiscreteSystem together with its node layout and any condition
/// warnings raised while building it.
struct Discretization {
  SemiDiscreteSystem system;
  NodeLayout layout;
  std::vector<std::string> warnings;
};

}  // namespace mmfd
