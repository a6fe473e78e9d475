#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mmfd/errors.hpp"

namespace mmfd {

/// Partition 0 = t_0 < t_1 < ... < t_N = T.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.size() < 2) throw InvalidConfig("time grid needs at least one step");
    for (std::size_t n = 1; n < times_.size(); ++n) {
      if (!(times_[n] > times_[n - 1])) {
        throw InvalidConfig("time grid not strictly increasing at level " + std::to_string(n));
      }
    }
  }

  /// N equal steps on [0, T].
  static TimeGrid uniform(double final_time, std::size_t steps) {
    if (steps == 0 || !(final_time > 0.0)) throw InvalidConfig("uniform grid: need T > 0, N >= 1");
    std::vector<double> t(steps + 1);
    for (std::size_t n = 0; n <= steps; ++n) {
      t[n] = final_time * static_cast<double>(n) / static_cast<double>(steps);
    }
    t.back() = final_time;
    return TimeGrid(std::move(t));
  }

  /// Equal steps of the smallest count N with T/N <= dt.
  static TimeGrid fitted(double final_time, double dt) {
    if (!(dt > 0.0)) throw InvalidConfig("time step must be positive");
    const double ratio = final_time / dt;
    auto steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * ratio));
    return uniform(final_time, std::max<std::size_t>(steps, 1));
  }

  [[nodiscard]] std::size_t steps() const { return times_.size() - 1; }
  [[nodiscard]] std::size_t levels() const { return times_.size(); }
  [[nodiscard]] double time(std::size_t n) const { return times_.at(n); }
  [[nodiscard]] double step(std::size_t n) const { return times_.at(n + 1) - times_.at(n); }
  [[nodiscard]] double start() const { return times_.front(); }
  [[nodiscard]] double final_time() const { return times_.back(); }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }

  [[nodiscard]] double max_step() const {
    double h = 0.0;
    for (std::size_t n = 0; n < steps(); ++n) h = std::max(h, step(n));
    return h;
  }

  /// Interval n with t_n < t <= t_{n+1} (left limit at grid levels; t_0
  /// belongs to interval 0). Piecewise-constant mesh speeds are taken from
  /// this interval.
  [[nodiscard]] std::size_t interval_of(double t) const {
    const double eps = 1e-12 * std::max(1.0, std::abs(final_time()));
    if (t < times_.front() - eps || t > times_.back() + eps) {
      throw OutOfRange("time " + std::to_string(t) + " outside grid");
    }
    auto it = std::lower_bound(times_.begin() + 1, times_.end(), t - eps);
    if (it == times_.end()) --it;
    return static_cast<std::size_t>(it - times_.begin()) - 1;
  }

 private:
  std::vector<double> times_;
};

}  // namespace mmfd
