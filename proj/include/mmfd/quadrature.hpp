#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "mmfd/errors.hpp"

namespace mmfd {

inline constexpr int kMaxCollocationOrder = 10;

/// Nodes and weights of a quadrature rule on (0,1).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// Legendre P_n(x) and P_n'(x) on [-1,1] by the three-term recurrence.
inline std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

inline void check_order(int m) {
  if (m < 1 || m > kMaxCollocationOrder) throw InvalidOrder(m);
}

}  // namespace detail

/// m-point Gauss-Legendre rule mapped to (0,1).
///
/// Initial guesses are the eigenvalues of the symmetric Jacobi (colleague)
/// matrix of the Legendre recurrence; each root is then polished by Newton
/// iteration on P_m until the update drops below 1e-15.
inline QuadratureRule gauss_nodes(int m) {
  detail::check_order(m);
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(m, m);
  for (int k = 1; k < m; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k - 1, k) = beta;
    jacobi(k, k - 1) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);
  std::vector<double> roots(eig.eigenvalues().data(), eig.eigenvalues().data() + m);

  QuadratureRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = roots[i];
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = detail::legendre_with_derivative(m, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    const auto [p, dp] = detail::legendre_with_derivative(m, x);
    (void)p;
    rule.nodes[i] = 0.5 * (1.0 + x);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/((1-x^2)P'^2), halved
  }
  // Symmetrize so that rho_j + rho_{m+1-j} == 1 holds exactly.
  std::sort(rule.nodes.begin(), rule.nodes.end());
  for (int i = 0; i < m / 2; ++i) {
    const double lo = 0.5 * (rule.nodes[i] + 1.0 - rule.nodes[m - 1 - i]);
    rule.nodes[i] = lo;
    rule.nodes[m - 1 - i] = 1.0 - lo;
    const double w = 0.5 * (rule.weights[i] + rule.weights[m - 1 - i]);
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.5;
  return rule;
}

/// Value of the k-th Lagrange basis polynomial on `nodes` at x.
inline double lagrange_basis(const std::vector<double>& nodes, std::size_t k, double x) {
  double value = 1.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i == k) continue;
    value *= (x - nodes[i]) / (nodes[k] - nodes[i]);
  }
  return value;
}

/// Derivative of the k-th Lagrange basis polynomial on `nodes` at x.
/// Uses the sum-of-products form, valid when x coincides with a node.
inline double lagrange_basis_derivative(const std::vector<double>& nodes, std::size_t k,
                                        double x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i == k) continue;
    double term = 1.0 / (nodes[k] - nodes[i]);
    for (std::size_t l = 0; l < nodes.size(); ++l) {
      if (l == k || l == i) continue;
      term *= (x - nodes[l]) / (nodes[k] - nodes[l]);
    }
    sum += term;
  }
  return sum;
}

/// The m-point Gauss-Legendre collocation scheme on the unit step.
///
/// The step solution is the degree-m polynomial through the interpolation
/// nodes rho_tilde = {0, interior Gauss points of order m-1, 1}; it is
/// required to satisfy the ODE at the m Gauss points rho.
struct CollocationScheme {
  int m = 0;
  std::vector<double> rho;
  std::vector<double> weights;
  std::vector<double> rho_tilde;
  Eigen::MatrixXd L;  ///< L(j,k) = l~_k(rho_j), m x (m+1)
  Eigen::MatrixXd D;  ///< D(j,k) = l~'_k(rho_j), m x (m+1)
  /// Lagrange weights on {0, rho_1..rho_m} evaluated at 1. Extrapolates a
  /// quantity known at the step start and at the Gauss points to the step end.
  std::vector<double> gauss_extrapolation;
};

inline CollocationScheme build_scheme(int m) {
  detail::check_order(m);
  CollocationScheme s;
  s.m = m;
  QuadratureRule gauss = gauss_nodes(m);
  s.rho = gauss.nodes;
  s.weights = gauss.weights;

  s.rho_tilde.push_back(0.0);
  if (m > 1) {
    const QuadratureRule inner = gauss_nodes(m - 1);
    s.rho_tilde.insert(s.rho_tilde.end(), inner.nodes.begin(), inner.nodes.end());
  }
  s.rho_tilde.push_back(1.0);

  s.L.resize(m, m + 1);
  s.D.resize(m, m + 1);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k <= m; ++k) {
      s.L(j, k) = lagrange_basis(s.rho_tilde, k, s.rho[j]);
      s.D(j, k) = lagrange_basis_derivative(s.rho_tilde, k, s.rho[j]);
    }
  }

  std::vector<double> start_and_gauss{0.0};
  start_and_gauss.insert(start_and_gauss.end(), s.rho.begin(), s.rho.end());
  s.gauss_extrapolation.resize(m + 1);
  for (int k = 0; k <= m; ++k) {
    s.gauss_extrapolation[k] = lagrange_basis(start_and_gauss, k, 1.0);
  }
  return s;
}

}  // namespace mmfd
