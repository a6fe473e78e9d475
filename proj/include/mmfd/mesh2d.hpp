#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "mmfd/errors.hpp"
#include "mmfd/time_grid.hpp"

namespace mmfd {

/// Metric terms (J xi_x, J xi_y, J eta_x, J eta_y) at one location.
struct Metrics {
  double xi_x = 0.0;
  double xi_y = 0.0;
  double eta_x = 0.0;
  double eta_y = 0.0;
};

/// Mesh speeds at the four half points around node (j,k):
/// suffix _w/_e are (j-1/2,k)/(j+1/2,k), _s/_n are (j,k-1/2)/(j,k+1/2).
struct HalfPointSpeeds {
  double x_w = 0.0, x_e = 0.0, x_s = 0.0, x_n = 0.0;
  double y_w = 0.0, y_e = 0.0, y_s = 0.0, y_n = 0.0;
};

struct HalfHalfMetrics {
  Metrics metrics;
  double jacobian = 0.0;
};

/// Node coordinates and speeds of a 2D mesh frozen at one time.
///
/// Half-point metrics and speeds are chosen so that the discrete geometric
/// conservation law (J' = discrete divergence of the mesh velocity) holds
/// identically; see jacobian_dot() and jacobian_rate().
class MeshSnapshot2D {
 public:
  MeshSnapshot2D(std::size_t j_max, std::size_t k_max, std::vector<double> x, std::vector<double> y,
                 std::vector<double> xdot, std::vector<double> ydot)
      : jm_(j_max), km_(k_max), x_(std::move(x)), y_(std::move(y)), xd_(std::move(xdot)),
        yd_(std::move(ydot)) {}

  [[nodiscard]] std::size_t j_max() const { return jm_; }
  [[nodiscard]] std::size_t k_max() const { return km_; }
  [[nodiscard]] std::size_t index(std::size_t j, std::size_t k) const { return k * (jm_ + 1) + j; }

  [[nodiscard]] double x(std::size_t j, std::size_t k) const { return x_[index(j, k)]; }
  [[nodiscard]] double y(std::size_t j, std::size_t k) const { return y_[index(j, k)]; }
  [[nodiscard]] double xdot(std::size_t j, std::size_t k) const { return xd_[index(j, k)]; }
  [[nodiscard]] double ydot(std::size_t j, std::size_t k) const { return yd_[index(j, k)]; }

  /// (J xi_x, J xi_y) at (j-1/2, k); requires 1 <= j <= J, 1 <= k <= K-1.
  [[nodiscard]] Metrics xi_face(std::size_t j, std::size_t k) const {
    require(j >= 1 && j <= jm_ && k >= 1 && k + 1 <= km_, "xi-face", j, k);
    return xi_face_of(x_, y_, j, k);
  }

  /// (J eta_x, J eta_y) at (j, k-1/2); requires 1 <= j <= J-1, 1 <= k <= K.
  [[nodiscard]] Metrics eta_face(std::size_t j, std::size_t k) const {
    require(j >= 1 && j + 1 <= jm_ && k >= 1 && k <= km_, "eta-face", j, k);
    return eta_face_of(x_, y_, j, k);
  }

  /// Metric time derivatives at the same faces (metrics are linear in the
  /// coordinates, so the rate is the same stencil applied to the speeds).
  [[nodiscard]] Metrics xi_face_rate(std::size_t j, std::size_t k) const {
    require(j >= 1 && j <= jm_ && k >= 1 && k + 1 <= km_, "xi-face", j, k);
    return xi_face_of(xd_, yd_, j, k);
  }
  [[nodiscard]] Metrics eta_face_rate(std::size_t j, std::size_t k) const {
    require(j >= 1 && j + 1 <= jm_ && k >= 1 && k <= km_, "eta-face", j, k);
    return eta_face_of(xd_, yd_, j, k);
  }

  /// 8-point weighted speed averages at (j-1/2,k).
  [[nodiscard]] std::pair<double, double> xi_face_speed(std::size_t j, std::size_t k) const {
    require(j >= 1 && j <= jm_ && k >= 1 && k + 1 <= km_, "xi-face speed", j, k);
    auto avg = [&](const std::vector<double>& s) {
      return (s[index(j, k - 1)] + s[index(j - 1, k - 1)] + 2.0 * s[index(j, k)] +
              2.0 * s[index(j - 1, k)] + s[index(j, k + 1)] + s[index(j - 1, k + 1)]) /
             8.0;
    };
    return {avg(xd_), avg(yd_)};
  }

  /// 8-point weighted speed averages at (j,k-1/2).
  [[nodiscard]] std::pair<double, double> eta_face_speed(std::size_t j, std::size_t k) const {
    require(j >= 1 && j + 1 <= jm_ && k >= 1 && k <= km_, "eta-face speed", j, k);
    auto avg = [&](const std::vector<double>& s) {
      return (s[index(j - 1, k)] + s[index(j - 1, k - 1)] + 2.0 * s[index(j, k)] +
              2.0 * s[index(j, k - 1)] + s[index(j + 1, k)] + s[index(j + 1, k - 1)]) /
             8.0;
    };
    return {avg(xd_), avg(yd_)};
  }

  [[nodiscard]] HalfPointSpeeds half_point_speeds(std::size_t j, std::size_t k) const {
    HalfPointSpeeds s;
    std::tie(s.x_w, s.y_w) = xi_face_speed(j, k);
    std::tie(s.x_e, s.y_e) = xi_face_speed(j + 1, k);
    std::tie(s.x_s, s.y_s) = eta_face_speed(j, k);
    std::tie(s.x_n, s.y_n) = eta_face_speed(j, k + 1);
    return s;
  }

  /// Nodal Jacobian as the product of averaged face metrics.
  [[nodiscard]] double jacobian(std::size_t j, std::size_t k) const {
    const Metrics w = xi_face(j, k), e = xi_face(j + 1, k);
    const Metrics s = eta_face(j, k), n = eta_face(j, k + 1);
    return 0.25 * (e.xi_x + w.xi_x) * (n.eta_y + s.eta_y) -
           0.25 * (e.xi_y + w.xi_y) * (n.eta_x + s.eta_x);
  }

  /// J' from the discrete geometric conservation law: the flux-form
  /// divergence of the half-point mesh velocity weighted by face metrics.
  [[nodiscard]] double jacobian_dot(std::size_t j, std::size_t k) const {
    const Metrics w = xi_face(j, k), e = xi_face(j + 1, k);
    const Metrics s = eta_face(j, k), n = eta_face(j, k + 1);
    const HalfPointSpeeds v = half_point_speeds(j, k);
    return e.xi_x * v.x_e - w.xi_x * v.x_w + e.xi_y * v.y_e - w.xi_y * v.y_w +
           n.eta_x * v.x_n - s.eta_x * v.x_s + n.eta_y * v.y_n - s.eta_y * v.y_s;
  }

  /// d/dt of jacobian() by the product rule on the linear-in-time metrics.
  [[nodiscard]] double jacobian_rate(std::size_t j, std::size_t k) const {
    const Metrics w = xi_face(j, k), e = xi_face(j + 1, k);
    const Metrics s = eta_face(j, k), n = eta_face(j, k + 1);
    const Metrics wd = xi_face_rate(j, k), ed = xi_face_rate(j + 1, k);
    const Metrics sd = eta_face_rate(j, k), nd = eta_face_rate(j, k + 1);
    const double p = e.xi_x + w.xi_x, pd = ed.xi_x + wd.xi_x;
    const double q = n.eta_y + s.eta_y, qd = nd.eta_y + sd.eta_y;
    const double r = e.xi_y + w.xi_y, rd = ed.xi_y + wd.xi_y;
    const double z = n.eta_x + s.eta_x, zd = nd.eta_x + sd.eta_x;
    return 0.25 * (pd * q + p * qd) - 0.25 * (rd * z + r * zd);
  }

  /// Metrics and Jacobian at the cell center (j-1/2, k-1/2), 1 <= j <= J, 1 <= k <= K.
  [[nodiscard]] HalfHalfMetrics halfhalf(std::size_t j, std::size_t k) const {
    require(j >= 1 && j <= jm_ && k >= 1 && k <= km_, "cell", j, k);
    auto d_eta = [&](const std::vector<double>& f) {
      return 0.5 * (f[index(j, k)] - f[index(j, k - 1)] + f[index(j - 1, k)] - f[index(j - 1, k - 1)]);
    };
    auto d_xi = [&](const std::vector<double>& f) {
      return 0.5 * (f[index(j, k)] - f[index(j - 1, k)] + f[index(j, k - 1)] - f[index(j - 1, k - 1)]);
    };
    HalfHalfMetrics h;
    h.metrics.xi_x = d_eta(y_);
    h.metrics.xi_y = -d_eta(x_);
    h.metrics.eta_x = -d_xi(y_);
    h.metrics.eta_y = d_xi(x_);
    h.jacobian = h.metrics.xi_x * h.metrics.eta_y - h.metrics.xi_y * h.metrics.eta_x;
    return h;
  }

 private:
  Metrics xi_face_of(const std::vector<double>& X, const std::vector<double>& Y, std::size_t j,
                     std::size_t k) const {
    Metrics m;
    m.xi_x = 0.25 * (Y[index(j, k + 1)] - Y[index(j, k - 1)] + Y[index(j - 1, k + 1)] -
                     Y[index(j - 1, k - 1)]);
    m.xi_y = -0.25 * (X[index(j, k + 1)] - X[index(j, k - 1)] + X[index(j - 1, k + 1)] -
                      X[index(j - 1, k - 1)]);
    return m;
  }

  Metrics eta_face_of(const std::vector<double>& X, const std::vector<double>& Y, std::size_t j,
                      std::size_t k) const {
    Metrics m;
    m.eta_x = -0.25 * (Y[index(j + 1, k)] - Y[index(j - 1, k)] + Y[index(j + 1, k - 1)] -
                       Y[index(j - 1, k - 1)]);
    m.eta_y = 0.25 * (X[index(j + 1, k)] - X[index(j - 1, k)] + X[index(j + 1, k - 1)] -
                      X[index(j - 1, k - 1)]);
    return m;
  }

  void require(bool ok, const char* what, std::size_t j, std::size_t k) const {
    if (!ok) {
      throw OutOfRange(std::string(what) + " stencil out of range at (" + std::to_string(j) + "," +
                       std::to_string(k) + ")");
    }
  }

  std::size_t jm_, km_;
  std::vector<double> x_, y_, xd_, yd_;
};

/// Structured 2D moving mesh, linear in time between time-grid levels.
class MovingMesh2D {
 public:
  MovingMesh2D(TimeGrid grid, std::size_t j_max, std::size_t k_max,
               std::vector<std::vector<double>> x, std::vector<std::vector<double>> y)
      : grid_(std::move(grid)), jm_(j_max), km_(k_max), x_(std::move(x)), y_(std::move(y)) {
    const std::size_t nodes = (jm_ + 1) * (km_ + 1);
    if (jm_ < 2 || km_ < 2) throw InvalidConfig("mesh2d: need at least 3x3 nodes");
    if (x_.size() != grid_.levels() || y_.size() != grid_.levels()) {
      throw DimensionMismatch("mesh2d: one coordinate set per time level required");
    }
    for (std::size_t n = 0; n < grid_.levels(); ++n) {
      if (x_[n].size() != nodes || y_[n].size() != nodes) {
        throw DimensionMismatch("mesh2d: wrong node count at level " + std::to_string(n));
      }
    }
    for (std::size_t n = 0; n < grid_.levels(); ++n) {
      const MeshSnapshot2D snap = level_snapshot(n);
      for (std::size_t k = 1; k < km_; ++k) {
        for (std::size_t j = 1; j < jm_; ++j) {
          if (!(snap.jacobian(j, k) > 0.0)) {
            throw TangledMesh("nonpositive nodal Jacobian at (" + std::to_string(j) + "," +
                                  std::to_string(k) + ") level " + std::to_string(n),
                              grid_.time(n));
          }
        }
      }
      for (std::size_t k = 1; k <= km_; ++k) {
        for (std::size_t j = 1; j <= jm_; ++j) {
          if (!(snap.halfhalf(j, k).jacobian > 0.0)) {
            throw TangledMesh("nonpositive cell Jacobian at (" + std::to_string(j) + "-1/2," +
                                  std::to_string(k) + "-1/2) level " + std::to_string(n),
                              grid_.time(n));
          }
        }
      }
    }
  }

  /// Samples a closed-form map (j, k, t) -> (x, y) at the time-grid levels.
  static MovingMesh2D sample(
      const TimeGrid& grid, std::size_t j_max, std::size_t k_max,
      const std::function<std::pair<double, double>(std::size_t, std::size_t, double)>& map) {
    const std::size_t nodes = (j_max + 1) * (k_max + 1);
    std::vector<std::vector<double>> x(grid.levels(), std::vector<double>(nodes));
    std::vector<std::vector<double>> y(grid.levels(), std::vector<double>(nodes));
    for (std::size_t n = 0; n < grid.levels(); ++n) {
      for (std::size_t k = 0; k <= k_max; ++k) {
        for (std::size_t j = 0; j <= j_max; ++j) {
          const auto [px, py] = map(j, k, grid.time(n));
          x[n][k * (j_max + 1) + j] = px;
          y[n][k * (j_max + 1) + j] = py;
        }
      }
    }
    return MovingMesh2D(grid, j_max, k_max, std::move(x), std::move(y));
  }

  [[nodiscard]] const TimeGrid& grid() const { return grid_; }
  [[nodiscard]] std::size_t j_max() const { return jm_; }
  [[nodiscard]] std::size_t k_max() const { return km_; }
  [[nodiscard]] std::size_t index(std::size_t j, std::size_t k) const { return k * (jm_ + 1) + j; }
  [[nodiscard]] double level_x(std::size_t n, std::size_t j, std::size_t k) const { return x_.at(n).at(index(j, k)); }
  [[nodiscard]] double level_y(std::size_t n, std::size_t j, std::size_t k) const { return y_.at(n).at(index(j, k)); }

  /// Coordinates at time t, speeds of the interval containing t.
  [[nodiscard]] MeshSnapshot2D snapshot(double t) const {
    const std::size_t n = grid_.interval_of(t);
    const double dt = grid_.step(n);
    const double theta = (t - grid_.time(n)) / dt;
    const std::size_t nodes = x_[n].size();
    std::vector<double> x(nodes), y(nodes), xd(nodes), yd(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
      x[i] = (1.0 - theta) * x_[n][i] + theta * x_[n + 1][i];
      y[i] = (1.0 - theta) * y_[n][i] + theta * y_[n + 1][i];
      xd[i] = (x_[n + 1][i] - x_[n][i]) / dt;
      yd[i] = (y_[n + 1][i] - y_[n][i]) / dt;
    }
    return MeshSnapshot2D(jm_, km_, std::move(x), std::move(y), std::move(xd), std::move(yd));
  }

  [[nodiscard]] std::pair<double, double> position(std::size_t j, std::size_t k, double t) const {
    const std::size_t n = grid_.interval_of(t);
    const double theta = (t - grid_.time(n)) / grid_.step(n);
    const std::size_t i = index(j, k);
    return {(1.0 - theta) * x_[n][i] + theta * x_[n + 1][i],
            (1.0 - theta) * y_[n][i] + theta * y_[n + 1][i]};
  }

  [[nodiscard]] HalfPointSpeeds half_point_speeds(std::size_t j, std::size_t k, double t) const {
    return snapshot(t).half_point_speeds(j, k);
  }

  /// ((J xi_x)_{j-1/2,k}, (J xi_y)_{j-1/2,k}, (J eta_x)_{j,k-1/2}, (J eta_y)_{j,k-1/2}).
  [[nodiscard]] Metrics half_point_metrics(std::size_t j, std::size_t k, double t) const {
    const MeshSnapshot2D s = snapshot(t);
    const Metrics xi = s.xi_face(j, k);
    const Metrics eta = s.eta_face(j, k);
    return {xi.xi_x, xi.xi_y, eta.eta_x, eta.eta_y};
  }

  [[nodiscard]] double jacobian_node(std::size_t j, std::size_t k, double t) const {
    return snapshot(t).jacobian(j, k);
  }

  [[nodiscard]] double jacobian_dot(std::size_t j, std::size_t k, double t) const {
    return snapshot(t).jacobian_dot(j, k);
  }

  /// |d/dt J_{j,k} - J'_{j,k}|: zero up to rounding when the discrete GCL holds.
  [[nodiscard]] double gcl_residual(std::size_t j, std::size_t k, double t) const {
    const MeshSnapshot2D s = snapshot(t);
    return std::abs(s.jacobian_rate(j, k) - s.jacobian_dot(j, k));
  }

  [[nodiscard]] HalfHalfMetrics halfhalf_metrics(std::size_t j, std::size_t k, double t) const {
    HalfHalfMetrics h = snapshot(t).halfhalf(j, k);
    if (!(h.jacobian > 0.0)) {
      throw TangledMesh("nonpositive cell Jacobian at (" + std::to_string(j) + "-1/2," +
                            std::to_string(k) + "-1/2)",
                        t);
    }
    return h;
  }

 private:
  MeshSnapshot2D level_snapshot(std::size_t n) const {
    const std::size_t nodes = x_[n].size();
    return MeshSnapshot2D(jm_, km_, x_[n], y_[n], std::vector<double>(nodes, 0.0),
                          std::vector<double>(nodes, 0.0));
  }

  TimeGrid grid_;
  std::size_t jm_, km_;
  std::vector<std::vector<double>> x_, y_;
};

/// Trajectory file: one row per time level holding (J+1)(K+1) coordinate
/// pairs "x y" in row-major order (k outer, j inner).
inline MovingMesh2D read_mesh2d(const TimeGrid& grid, std::size_t j_max, std::size_t k_max,
                                std::istream& in) {
  std::vector<std::vector<double>> xs, ys;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> x, y;
    double a = 0.0, b = 0.0;
    while (ls >> a >> b) {
      x.push_back(a);
      y.push_back(b);
    }
    if (!x.empty()) {
      xs.push_back(std::move(x));
      ys.push_back(std::move(y));
    }
  }
  return MovingMesh2D(grid, j_max, k_max, std::move(xs), std::move(ys));
}

inline void write_mesh2d(const MovingMesh2D& mesh, std::ostream& out) {
  out.precision(17);
  for (std::size_t n = 0; n < mesh.grid().levels(); ++n) {
    for (std::size_t k = 0; k <= mesh.k_max(); ++k) {
      for (std::size_t j = 0; j <= mesh.j_max(); ++j) {
        if (j || k) out << ' ';
        out << mesh.level_x(n, j, k) << ' ' << mesh.level_y(n, j, k);
      }
    }
    out << '\n';
  }
}

}  // namespace mmfd
