#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mmfd/errors.hpp"
#include "mmfd/time_grid.hpp"

namespace mmfd {

/// One-dimensional moving mesh x_0(t) < ... < x_J(t).
///
/// Node positions are given at the time-grid levels and vary linearly in
/// time between them, so node speeds are constant on each interval.
class MovingMesh1D {
 public:
  MovingMesh1D(TimeGrid grid, std::vector<std::vector<double>> positions)
      : grid_(std::move(grid)), x_(std::move(positions)) {
    if (x_.size() != grid_.levels()) {
      throw DimensionMismatch("mesh1d: one row of positions per time level required");
    }
    if (x_.front().size() < 2) throw InvalidConfig("mesh1d: need at least two nodes");
    for (std::size_t n = 0; n < x_.size(); ++n) {
      if (x_[n].size() != x_.front().size()) {
        throw DimensionMismatch("mesh1d: node count differs at level " + std::to_string(n));
      }
      for (std::size_t j = 1; j < x_[n].size(); ++j) {
        if (!(x_[n][j] > x_[n][j - 1])) {
          throw TangledMesh("cell " + std::to_string(j) + " at level " + std::to_string(n),
                            grid_.time(n));
        }
      }
    }
  }

  /// Samples a closed-form trajectory x(j, t) at the time-grid levels.
  static MovingMesh1D sample(const TimeGrid& grid, std::size_t j_max,
                             const std::function<double(std::size_t, double)>& trajectory) {
    std::vector<std::vector<double>> x(grid.levels(), std::vector<double>(j_max + 1));
    for (std::size_t n = 0; n < grid.levels(); ++n) {
      for (std::size_t j = 0; j <= j_max; ++j) x[n][j] = trajectory(j, grid.time(n));
    }
    return MovingMesh1D(grid, std::move(x));
  }

  [[nodiscard]] const TimeGrid& grid() const { return grid_; }
  [[nodiscard]] std::size_t j_max() const { return x_.front().size() - 1; }
  [[nodiscard]] std::size_t node_count() const { return x_.front().size(); }
  [[nodiscard]] double level_position(std::size_t n, std::size_t j) const { return x_.at(n).at(j); }

  [[nodiscard]] double position(std::size_t j, double t) const {
    check_node(j);
    const std::size_t n = grid_.interval_of(t);
    const double theta = (t - grid_.time(n)) / grid_.step(n);
    return (1.0 - theta) * x_[n][j] + theta * x_[n + 1][j];
  }

  /// Speed of node j on interval [t_n, t_{n+1}].
  [[nodiscard]] double speed(std::size_t j, std::size_t interval) const {
    check_node(j);
    return (x_.at(interval + 1)[j] - x_.at(interval)[j]) / grid_.step(interval);
  }

  [[nodiscard]] double speed_at(std::size_t j, double t) const {
    return speed(j, grid_.interval_of(t));
  }

  /// (x'_j + x'_{j+1}) / 2.
  [[nodiscard]] double half_speed(std::size_t j, std::size_t interval) const {
    return 0.5 * (speed(j, interval) + speed(j + 1, interval));
  }

  /// h_j(t) = x_j(t) - x_{j-1}(t), 1 <= j <= J.
  [[nodiscard]] double cell_width(std::size_t j, double t) const {
    if (j == 0 || j > j_max()) throw OutOfRange("cell index " + std::to_string(j));
    const double h = position(j, t) - position(j - 1, t);
    if (!(h > 0.0)) throw TangledMesh("cell " + std::to_string(j), t);
    return h;
  }

  [[nodiscard]] double cell_width_rate(std::size_t j, std::size_t interval) const {
    if (j == 0 || j > j_max()) throw OutOfRange("cell index " + std::to_string(j));
    return speed(j, interval) - speed(j - 1, interval);
  }

  /// All node positions at time t.
  [[nodiscard]] std::vector<double> positions(double t) const {
    const std::size_t n = grid_.interval_of(t);
    const double theta = (t - grid_.time(n)) / grid_.step(n);
    std::vector<double> x(node_count());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = (1.0 - theta) * x_[n][j] + theta * x_[n + 1][j];
    return x;
  }

  /// All node speeds on the interval containing t.
  [[nodiscard]] std::vector<double> speeds(double t) const {
    const std::size_t n = grid_.interval_of(t);
    std::vector<double> s(node_count());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = (x_[n + 1][j] - x_[n][j]) / grid_.step(n);
    return s;
  }

 private:
  void check_node(std::size_t j) const {
    if (j > j_max()) throw OutOfRange("node index " + std::to_string(j));
  }

  TimeGrid grid_;
  std::vector<std::vector<double>> x_;
};

/// Reads a trajectory file: one row per time level, whitespace-separated
/// node positions.
inline MovingMesh1D read_mesh1d(const TimeGrid& grid, std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double x = 0.0;
    while (ls >> x) row.push_back(x);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return MovingMesh1D(grid, std::move(rows));
}

inline void write_mesh1d(const MovingMesh1D& mesh, std::ostream& out) {
  out.precision(17);
  for (std::size_t n = 0; n < mesh.grid().levels(); ++n) {
    for (std::size_t j = 0; j <= mesh.j_max(); ++j) {
      if (j) out << ' ';
      out << mesh.level_position(n, j);
    }
    out << '\n';
  }
}

}  // namespace mmfd
