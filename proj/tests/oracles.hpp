#pragma once

// Independent reference implementations used only by the tests. Nothing here
// calls into the library's numerical kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Fn1 = std::function<double(double)>;

/// Roots of the shifted Legendre polynomial P_m(2x-1) via companion-matrix
/// eigenvalues, weights from the moment system sum w_i x_i^k = 1/(k+1).
struct Rule {
  std::vector<double> nodes, weights;
};

inline Rule gauss_companion(int m) {
  // Monomial coefficients of P_n on [-1,1] via (n+1)P_{n+1} = (2n+1)xP_n - nP_{n-1}.
  std::vector<double> p0{1.0}, p1{0.0, 1.0};
  if (m == 0) return {};
  for (int n = 1; n < m; ++n) {
    std::vector<double> p2(static_cast<std::size_t>(n + 2), 0.0);
    for (int i = 0; i <= n; ++i) p2[static_cast<std::size_t>(i + 1)] += (2.0 * n + 1.0) * p1[static_cast<std::size_t>(i)];
    for (int i = 0; i < n; ++i) p2[static_cast<std::size_t>(i)] -= n * p0[static_cast<std::size_t>(i)];
    for (double& c : p2) c /= (n + 1.0);
    p0 = p1;
    p1 = p2;
  }
  const std::vector<double>& p = m == 1 ? std::vector<double>{0.0, 1.0} : p1;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) comp(i, m - 1) = -p[static_cast<std::size_t>(i)] / p[static_cast<std::size_t>(m)];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
  Rule r;
  for (int i = 0; i < m; ++i) r.nodes.push_back(0.5 * (es.eigenvalues()[i].real() + 1.0));
  std::sort(r.nodes.begin(), r.nodes.end());
  Eigen::MatrixXd v(m, m);
  Eigen::VectorXd rhs(m);
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) v(k, i) = std::pow(r.nodes[static_cast<std::size_t>(i)], k);
    rhs[k] = 1.0 / (k + 1.0);
  }
  const Eigen::VectorXd w = v.fullPivLu().solve(rhs);
  r.weights.assign(w.data(), w.data() + m);
  return r;
}

/// Barycentric Lagrange basis value and derivative.
inline std::vector<double> barycentric_weights(const std::vector<double>& x) {
  std::vector<double> w(x.size(), 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (k != i) w[i] /= (x[i] - x[k]);
    }
  }
  return w;
}

inline double lagrange(const std::vector<double>& x, std::size_t k, double t) {
  const std::vector<double> w = barycentric_weights(x);
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (t == x[i]) return i == k ? 1.0 : 0.0;
    den += w[i] / (t - x[i]);
  }
  return (w[k] / (t - x[k])) / den;
}

inline double lagrange_derivative(const std::vector<double>& x, std::size_t k, double t) {
  // l_k'(t) = l_k(t) * sum_{i != k} 1 / (t - x_i), valid away from the nodes.
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i != k) s += 1.0 / (t - x[i]);
  }
  return lagrange(x, k, t) * s;
}

/// Sixth-order central differences.
inline double d1(const Fn1& f, double x, double h = 1e-2) {
  return (-f(x - 3 * h) + 9 * f(x - 2 * h) - 45 * f(x - h) + 45 * f(x + h) - 9 * f(x + 2 * h) +
          f(x + 3 * h)) /
         (60 * h);
}

inline double d2(const Fn1& f, double x, double h = 1e-2) {
  return (2 * f(x - 3 * h) - 27 * f(x - 2 * h) + 270 * f(x - h) - 490 * f(x) + 270 * f(x + h) -
          27 * f(x + 2 * h) + 2 * f(x + 3 * h)) /
         (180 * h * h);
}

using Coef1 = std::function<double(double, double)>;

/// Literal 1D conservative operator: (A u)_j for j = 1..J-1 given the full
/// node vector u_0..u_J, positions x and speeds xd at time t.
inline std::vector<double> conservative_apply(const Coef1& a, const Coef1& b, const Coef1& c,
                                              const std::vector<double>& x,
                                              const std::vector<double>& xd,
                                              const std::vector<double>& u, double t) {
  const std::size_t jm = x.size() - 1;
  std::vector<double> out(jm - 1);
  for (std::size_t j = 1; j < jm; ++j) {
    const double h_p = x[j + 1] - x[j], h_m = x[j] - x[j - 1];
    const double hd_p = xd[j + 1] - xd[j], hd_m = xd[j] - xd[j - 1];
    const double a_p = a((x[j] + x[j + 1]) / 2, t), a_m = a((x[j - 1] + x[j]) / 2, t);
    const double b_p = b((x[j] + x[j + 1]) / 2, t), b_m = b((x[j - 1] + x[j]) / 2, t);
    const double xd_p = (xd[j] + xd[j + 1]) / 2, xd_m = (xd[j - 1] + xd[j]) / 2;
    out[j - 1] = a_p * (u[j + 1] - u[j]) / h_p - a_m * (u[j] - u[j - 1]) / h_m -
                 (hd_p + hd_m) / 2 * u[j] - (h_p + h_m) / 2 * c(x[j], t) * u[j] -
                 (b_p - xd_p) * (u[j + 1] + u[j]) / 2 + (b_m - xd_m) * (u[j] + u[j - 1]) / 2;
  }
  return out;
}

/// Interior-by-interior matrix of a linear map on full node vectors with
/// zero boundary entries.
inline Eigen::MatrixXd matrix_of(std::size_t n_nodes, const std::vector<std::size_t>& interior,
                                 const std::function<std::vector<double>(const std::vector<double>&)>& apply) {
  const auto l = static_cast<Eigen::Index>(interior.size());
  Eigen::MatrixXd m(l, l);
  for (Eigen::Index col = 0; col < l; ++col) {
    std::vector<double> u(n_nodes, 0.0);
    u[interior[static_cast<std::size_t>(col)]] = 1.0;
    const std::vector<double> au = apply(u);
    for (Eigen::Index row = 0; row < l; ++row) m(row, col) = au[static_cast<std::size_t>(row)];
  }
  return m;
}

using Coef2 = std::function<double(double, double, double)>;

/// Literal 2D operator: grid given as X[k][j], Y[k][j] and speeds; returns
/// (A u) at interior nodes in row-major order (j fastest).
struct Grid2 {
  std::vector<std::vector<double>> x, y, xd, yd;  // [k][j]
};

inline std::vector<double> operator2d_apply(const Coef2& a, const Coef2& b1, const Coef2& b2,
                                            const Coef2& c, const Grid2& g,
                                            const std::vector<std::vector<double>>& u, double t) {
  const std::size_t km = g.x.size() - 1, jm = g.x[0].size() - 1;
  auto X = [&](long j, long k) { return g.x[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]; };
  auto Y = [&](long j, long k) { return g.y[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]; };
  auto XD = [&](long j, long k) { return g.xd[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]; };
  auto YD = [&](long j, long k) { return g.yd[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]; };
  auto U = [&](long j, long k) { return u[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]; };

  // (J xi_x, J xi_y) at (j-1/2, k) and (J eta_x, J eta_y) at (j, k-1/2).
  auto jxix = [&](long j, long k) { return (Y(j, k + 1) - Y(j, k - 1) + Y(j - 1, k + 1) - Y(j - 1, k - 1)) / 4; };
  auto jxiy = [&](long j, long k) { return -(X(j, k + 1) - X(j, k - 1) + X(j - 1, k + 1) - X(j - 1, k - 1)) / 4; };
  auto jetax = [&](long j, long k) { return -(Y(j + 1, k) - Y(j - 1, k) + Y(j + 1, k - 1) - Y(j - 1, k - 1)) / 4; };
  auto jetay = [&](long j, long k) { return (X(j + 1, k) - X(j - 1, k) + X(j + 1, k - 1) - X(j - 1, k - 1)) / 4; };
  auto spd_xi = [&](auto S, long j, long k) {
    return (S(j, k - 1) + S(j - 1, k - 1) + 2 * S(j, k) + 2 * S(j - 1, k) + S(j, k + 1) + S(j - 1, k + 1)) / 8;
  };
  auto spd_eta = [&](auto S, long j, long k) {
    return (S(j - 1, k) + S(j - 1, k - 1) + 2 * S(j, k) + 2 * S(j, k - 1) + S(j + 1, k) + S(j + 1, k - 1)) / 8;
  };
  auto q1 = [&](long j, long k) {  // at (j-1/2, k)
    const double px = (X(j, k) + X(j - 1, k)) / 2, py = (Y(j, k) + Y(j - 1, k)) / 2;
    return (U(j, k) + U(j - 1, k)) / 2 *
           (jxix(j, k) * (b1(px, py, t) - spd_xi(XD, j, k)) + jxiy(j, k) * (b2(px, py, t) - spd_xi(YD, j, k)));
  };
  auto q2 = [&](long j, long k) {  // at (j, k-1/2)
    const double px = (X(j, k) + X(j, k - 1)) / 2, py = (Y(j, k) + Y(j, k - 1)) / 2;
    return (U(j, k) + U(j, k - 1)) / 2 *
           (jetax(j, k) * (b1(px, py, t) - spd_eta(XD, j, k)) + jetay(j, k) * (b2(px, py, t) - spd_eta(YD, j, k)));
  };
  // Half-half quantities at (j-1/2, k-1/2).
  struct HH {
    double p1, p2;
  };
  auto hh = [&](long j, long k) {
    const double xi_x = (Y(j, k) - Y(j, k - 1) + Y(j - 1, k) - Y(j - 1, k - 1)) / 2;
    const double xi_y = -(X(j, k) - X(j, k - 1) + X(j - 1, k) - X(j - 1, k - 1)) / 2;
    const double eta_x = -(Y(j, k) - Y(j - 1, k) + Y(j, k - 1) - Y(j - 1, k - 1)) / 2;
    const double eta_y = (X(j, k) - X(j - 1, k) + X(j, k - 1) - X(j - 1, k - 1)) / 2;
    const double jac = xi_x * eta_y - xi_y * eta_x;
    const double px = (X(j, k) + X(j - 1, k) + X(j, k - 1) + X(j - 1, k - 1)) / 4;
    const double py = (Y(j, k) + Y(j - 1, k) + Y(j, k - 1) + Y(j - 1, k - 1)) / 4;
    const double f = a(px, py, t) / (2 * jac);
    const double du_xi = U(j, k) - U(j - 1, k) + U(j, k - 1) - U(j - 1, k - 1);
    const double du_eta = U(j, k) - U(j, k - 1) + U(j - 1, k) - U(j - 1, k - 1);
    const double g11 = xi_x * xi_x + xi_y * xi_y, g12 = xi_x * eta_x + xi_y * eta_y;
    const double g22 = eta_x * eta_x + eta_y * eta_y;
    return HH{f * g11 * du_xi + f * g12 * du_eta, f * g12 * du_xi + f * g22 * du_eta};
  };

  std::vector<double> out;
  for (long k = 1; k < static_cast<long>(km); ++k) {
    for (long j = 1; j < static_cast<long>(jm); ++j) {
      const double jac = 0.25 * (jxix(j + 1, k) + jxix(j, k)) * (jetay(j, k + 1) + jetay(j, k)) -
                         0.25 * (jxiy(j + 1, k) + jxiy(j, k)) * (jetax(j, k + 1) + jetax(j, k));
      const double jdot = jxix(j + 1, k) * spd_xi(XD, j + 1, k) - jxix(j, k) * spd_xi(XD, j, k) +
                          jxiy(j + 1, k) * spd_xi(YD, j + 1, k) - jxiy(j, k) * spd_xi(YD, j, k) +
                          jetax(j, k + 1) * spd_eta(XD, j, k + 1) - jetax(j, k) * spd_eta(XD, j, k) +
                          jetay(j, k + 1) * spd_eta(YD, j, k + 1) - jetay(j, k) * spd_eta(YD, j, k);
      const HH ne = hh(j + 1, k + 1), nw = hh(j, k + 1), se = hh(j + 1, k), sw = hh(j, k);
      double v = -jdot * U(j, k) - (q1(j + 1, k) - q1(j, k)) - (q2(j, k + 1) - q2(j, k)) -
                 c(X(j, k), Y(j, k), t) * U(j, k) * jac;
      v += 0.5 * (ne.p1 - nw.p1 + se.p1 - sw.p1);
      v += 0.5 * (ne.p2 - se.p2 + nw.p2 - sw.p2);
      out.push_back(v);
    }
  }
  return out;
}

/// Dense linear ODE M(t) u' = A(t) u + f(t) for the stepping oracles.
struct DenseSystem {
  std::function<Eigen::VectorXd(double)> mass, dsqrtmass, f;
  std::function<Eigen::MatrixXd(double)> a;
};

/// Midpoint step of v' = B v + M^{-1/2} f at t_n + dt/2.
inline Eigen::VectorXd midpoint_step(const DenseSystem& s, double tn, double dt,
                                     const Eigen::VectorXd& vn) {
  const double th = tn + dt / 2;
  const Eigen::VectorXd sq = s.mass(th).array().sqrt();
  const Eigen::VectorXd inv = sq.cwiseInverse();
  Eigen::MatrixXd b = inv.asDiagonal() * s.a(th) * inv.asDiagonal();
  b.diagonal() += s.dsqrtmass(th).cwiseProduct(inv);
  const auto n = vn.size();
  const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) - dt / 2 * b;
  const Eigen::VectorXd rhs = vn + dt / 2 * (b * vn) + dt * inv.cwiseProduct(s.f(th));
  return lhs.fullPivLu().solve(rhs);
}

/// One midpoint step written directly in terms of the node values
/// (m_j = sqrt of the 1D mass). `x_n`, `x_np1` are the mesh at the two
/// levels; `ub_n`, `ub_np1` the boundary values (u_0, u_J) at those levels.
inline Eigen::VectorXd midpoint_u_form(const Coef1& a, const Coef1& b, const Coef1& c,
                                       const Coef1& f, const std::vector<double>& x_n,
                                       const std::vector<double>& x_np1, double tn, double dt,
                                       const Eigen::VectorXd& vn, double ub0_n, double ub0_np1,
                                       double ubJ_n, double ubJ_np1) {
  const std::size_t jm = x_n.size() - 1;
  const double th = tn + dt / 2;
  std::vector<double> x(jm + 1), xd(jm + 1);
  for (std::size_t j = 0; j <= jm; ++j) {
    x[j] = (x_n[j] + x_np1[j]) / 2;
    xd[j] = (x_np1[j] - x_n[j]) / dt;
  }
  const auto l = static_cast<Eigen::Index>(jm - 1);
  auto mj = [&](std::size_t j) { return std::sqrt((x[j + 1] - x[j - 1]) / 2); };
  // Unknown w_j = v_j^{n+1}; sums s_j = (v^n_j + v^{n+1}_j) / m_j for interior,
  // u_b^n + u_b^{n+1} for the boundary nodes.
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(l, l);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(l);
  // Row j: m_j (w_j - v_j)/dt + sum_i K_ji s_i = m_j^2 f_j, with s_i linear in w.
  for (std::size_t j = 1; j < jm; ++j) {
    const auto r = static_cast<Eigen::Index>(j - 1);
    const double h_p = x[j + 1] - x[j], h_m = x[j] - x[j - 1];
    const double hd_p = xd[j + 1] - xd[j], hd_m = xd[j] - xd[j - 1];
    const double a_p = a((x[j] + x[j + 1]) / 2, th), a_m = a((x[j - 1] + x[j]) / 2, th);
    const double b_p = b((x[j] + x[j + 1]) / 2, th), b_m = b((x[j - 1] + x[j]) / 2, th);
    const double xd_p = (xd[j] + xd[j + 1]) / 2, xd_m = (xd[j - 1] + xd[j]) / 2;
    const double m = mj(j);
    // Coefficients multiplying s_{j-1}, s_j, s_{j+1} on the left-hand side.
    const double k_lo = -(b_m - xd_m) / 4 - a_m / (2 * h_m);
    const double k_di = (hd_p + hd_m) / 8 + (b_p - xd_p) / 4 - (b_m - xd_m) / 4 +
                        m * m * c(x[j], th) / 2 + a_p / (2 * h_p) + a_m / (2 * h_m);
    const double k_up = (b_p - xd_p) / 4 - a_p / (2 * h_p);
    lhs(r, r) += m / dt;
    rhs[r] += m / dt * vn[r] + m * m * f(x[j], th);
    const double k[3] = {k_lo, k_di, k_up};
    for (int o = -1; o <= 1; ++o) {
      const std::size_t i = j + static_cast<std::size_t>(o + 1) - 1;
      const double kk = k[o + 1];
      if (i == 0) {
        rhs[r] -= kk * (ub0_n + ub0_np1);
      } else if (i == jm) {
        rhs[r] -= kk * (ubJ_n + ubJ_np1);
      } else {
        const auto ci = static_cast<Eigen::Index>(i - 1);
        lhs(r, ci) += kk / mj(i);
        rhs[r] -= kk * vn[ci] / mj(i);
      }
    }
  }
  return lhs.fullPivLu().solve(rhs);
}

}  // namespace oracle
