#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mmfd/disc1d.hpp"
#include "mmfd/disc2d.hpp"
#include "mmfd/discretization.hpp"
#include "mmfd/errors.hpp"
#include "mmfd/integrator.hpp"
#include "mmfd/problems.hpp"
#include "mmfd/quadrature.hpp"
#include "mmfd/time_grid.hpp"

namespace mmfd {

enum class ExampleId { ex51_sin, ex51_cos, ex52, ex53 };

inline ExampleId parse_example(const std::string& s) {
  if (s == "5.1-sin") return ExampleId::ex51_sin;
  if (s == "5.1-cos") return ExampleId::ex51_cos;
  if (s == "5.2") return ExampleId::ex52;
  if (s == "5.3") return ExampleId::ex53;
  throw InvalidConfig("unknown example '" + s + "' (expected 5.1-sin, 5.1-cos, 5.2 or 5.3)");
}

inline std::string to_string(ExampleId id) {
  switch (id) {
    case ExampleId::ex51_sin: return "5.1-sin";
    case ExampleId::ex51_cos: return "5.1-cos";
    case ExampleId::ex52: return "5.2";
    case ExampleId::ex53: return "5.3";
  }
  return "?";
}

enum class SchemeChoice { conservative, nonconservative, twocell };

inline SchemeChoice parse_scheme(const std::string& s) {
  if (s == "conservative" || s == "2d") return SchemeChoice::conservative;
  if (s == "nonconservative") return SchemeChoice::nonconservative;
  if (s == "twocell") return SchemeChoice::twocell;
  throw InvalidConfig("unknown scheme '" + s + "'");
}

struct RunConfig {
  ExampleId example = ExampleId::ex51_sin;
  double omega = 2.0 * std::numbers::pi;
  int m = 1;
  TimeMethod method = TimeMethod::collocation;
  std::size_t j_max = 40;
  std::size_t k_max = 0;  ///< 0: same as j_max
  std::optional<double> dt;  ///< empty: dt = (pi / J_max)^(1/m)
  std::optional<BcStrategy> bc;
  SchemeChoice scheme = SchemeChoice::conservative;
  double final_time = 1.0;
  std::size_t min_steps = 1;
  bool homogeneous = false;
  bool include_boundary_error = false;
  std::string output;

  void validate() const {
    if (m < 1 || m > kMaxCollocationOrder) throw InvalidOrder(m);
    if (j_max < 2) throw InvalidConfig("J_max must be at least 2");
    if (dt && !(*dt > 0.0)) throw InvalidConfig("dt must be positive");
    if (!(final_time > 0.0)) throw InvalidConfig("T must be positive");
    if (!std::isfinite(omega)) throw InvalidConfig("omega must be finite");
  }

  [[nodiscard]] double step() const {
    return dt ? *dt : std::pow(std::numbers::pi / static_cast<double>(j_max), 1.0 / m);
  }
};

/// Uniform grid with step exactly dt covering [0, T]: the last level may
/// overshoot T by less than one step.
inline TimeGrid harness_grid(double final_time, double dt, std::size_t min_steps = 1) {
  const auto n = static_cast<std::size_t>(std::ceil(final_time / dt - 1e-9));
  const std::size_t steps = std::max<std::size_t>({n, min_steps, 1});
  return TimeGrid::uniform(static_cast<double>(steps) * dt, steps);
}

struct RunSummary {
  double max_error = std::numeric_limits<double>::quiet_NaN();  ///< NaN for homogeneous runs
  std::optional<bool> energy_monotone;  ///< only meaningful for homogeneous runs
  double max_abs_u = 0.0;
  double max_abs_u0 = 0.0;
  double energy_ratio = 0.0;  ///< max_n E_n / E_0
  double dt = 0.0;
  std::size_t steps = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
};

namespace detail {

inline RunSummary summarize(const SolutionHistory& h, bool homogeneous) {
  RunSummary s;
  s.steps = h.grid.steps();
  s.dt = h.grid.max_step();
  for (std::size_t n = 0; n < h.u.size(); ++n) {
    const double v = h.u[n].size() ? h.u[n].cwiseAbs().maxCoeff() : 0.0;
    if (n == 0) s.max_abs_u0 = v;
    s.max_abs_u = std::max(s.max_abs_u, v);
  }
  const double e0 = h.energy.front();
  for (double e : h.energy) s.energy_ratio = std::max(s.energy_ratio, e0 > 0.0 ? e / e0 : 0.0);
  if (homogeneous) s.energy_monotone = h.energy_monotone();
  return s;
}

}  // namespace detail

/// Builds problem, mesh and system for the configuration and integrates.
inline RunSummary run(const RunConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const CollocationScheme scheme = build_scheme(cfg.m);
  const TimeGrid grid = harness_grid(cfg.final_time, cfg.step(), cfg.min_steps);
  IntegrateOptions opts;
  opts.method = cfg.method;
  opts.monitor = cfg.homogeneous;
  opts.homogeneous = cfg.homogeneous;

  RunSummary out;
  if (cfg.example == ExampleId::ex53) {
    const Example2D ex = example_5_3(cfg.omega);
    const std::size_t km = cfg.k_max ? cfg.k_max : cfg.j_max;
    const MovingMesh2D mesh = ex.mesh(grid, cfg.j_max, km);
    const Problem2D prob = cfg.homogeneous ? homogeneous_variant(ex.problem) : ex.problem;
    const Discretization d =
        build_system_2d(prob, mesh, cfg.bc.value_or(BcStrategy::approximation_points));
    const SolutionHistory h =
        integrate(d.system, grid, scheme, initial_values_2d(prob, mesh, d.layout), opts);
    out = detail::summarize(h, cfg.homogeneous);
    if (!cfg.homogeneous) {
      out.max_error = max_error(h, ex.exact, mesh, d.layout, cfg.include_boundary_error);
    }
    out.warnings = d.warnings;
  } else {
    Example1D ex;
    switch (cfg.example) {
      case ExampleId::ex51_sin: ex = example_5_1(cfg.omega, Variant51::sin); break;
      case ExampleId::ex51_cos: ex = example_5_1(cfg.omega, Variant51::cos); break;
      default: ex = example_5_2(cfg.omega); break;
    }
    BcStrategy bc = cfg.bc.value_or(ex.forced_bc.value_or(BcStrategy::approximation_points));
    if (ex.forced_bc && bc != *ex.forced_bc) {
      throw InvalidConfig("example " + to_string(cfg.example) + " requires the '" +
                          std::string(mmfd::to_string(*ex.forced_bc)) + "' boundary strategy");
    }
    const MovingMesh1D mesh = ex.mesh(grid, cfg.j_max);
    const Problem1D prob = cfg.homogeneous ? homogeneous_variant(ex.problem) : ex.problem;
    Scheme1D s1 = Scheme1D::conservative;
    if (cfg.scheme == SchemeChoice::nonconservative) s1 = Scheme1D::nonconservative_halfpoint;
    if (cfg.scheme == SchemeChoice::twocell) s1 = Scheme1D::twocell;
    const Discretization d = build_system_1d(s1, prob, mesh, bc);
    const SolutionHistory h = integrate(d.system, grid, scheme, initial_values_1d(prob, mesh), opts);
    out = detail::summarize(h, cfg.homogeneous);
    if (!cfg.homogeneous) {
      out.max_error = max_error(h, ex.exact, mesh, d.layout, cfg.include_boundary_error);
    }
    out.warnings = d.warnings;
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

enum class ConvergenceMode { temporal, coupled };

inline ConvergenceMode parse_mode(const std::string& s) {
  if (s == "temporal") return ConvergenceMode::temporal;
  if (s == "coupled" || s == "spatial-coupled") return ConvergenceMode::coupled;
  throw InvalidConfig("unknown convergence mode '" + s + "'");
}

struct ErrorRow {
  std::size_t level = 0;
  std::size_t j_max = 0;
  double dt = 0.0;
  double max_error = 0.0;
  std::optional<double> observed_order;
  std::optional<bool> energy_monotone;
  double wall_seconds = 0.0;
};

struct ErrorReport {
  ConvergenceMode mode = ConvergenceMode::coupled;
  std::vector<ErrorRow> rows;

  /// Observed orders from the second row on.
  [[nodiscard]] std::vector<double> orders() const {
    std::vector<double> out;
    for (const ErrorRow& r : rows) {
      if (r.observed_order) out.push_back(*r.observed_order);
    }
    return out;
  }
};

/// log(e_i / e_{i+1}) / log(r).
inline double observed_order(double e_coarse, double e_fine, double ratio) {
  return std::log(e_coarse / e_fine) / std::log(ratio);
}

/// Temporal mode halves dt per level at fixed J_max (dt of the first level
/// from the config); coupled mode doubles J_max with dt = (pi / J_max)^(1/m).
inline ErrorReport convergence(const RunConfig& base, ConvergenceMode mode, std::size_t levels,
                               bool concurrent = false) {
  if (levels < 3) throw InvalidConfig("convergence needs at least 3 levels");
  base.validate();
  if (base.homogeneous) throw InvalidConfig("convergence needs the nonhomogeneous problem");
  std::vector<RunConfig> cfgs;
  for (std::size_t i = 0; i < levels; ++i) {
    RunConfig c = base;
    const double scale = std::ldexp(1.0, static_cast<int>(i));
    if (mode == ConvergenceMode::temporal) {
      c.dt = base.step() / scale;
    } else {
      c.j_max = base.j_max << i;
      if (base.k_max) c.k_max = base.k_max << i;
      c.dt.reset();
    }
    cfgs.push_back(c);
  }

  std::vector<RunSummary> results(levels);
  if (concurrent) {
    std::vector<std::future<RunSummary>> jobs;
    for (const RunConfig& c : cfgs) jobs.push_back(std::async(std::launch::async, run, c));
    for (std::size_t i = 0; i < levels; ++i) results[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < levels; ++i) results[i] = run(cfgs[i]);
  }

  ErrorReport rep;
  rep.mode = mode;
  for (std::size_t i = 0; i < levels; ++i) {
    ErrorRow row;
    row.level = i;
    row.j_max = cfgs[i].j_max;
    row.dt = results[i].dt;
    row.max_error = results[i].max_error;
    row.energy_monotone = results[i].energy_monotone;
    row.wall_seconds = results[i].wall_seconds;
    if (i > 0) {
      const double ratio = mode == ConvergenceMode::temporal
                               ? rep.rows[i - 1].dt / row.dt
                               : static_cast<double>(row.j_max) / static_cast<double>(rep.rows[i - 1].j_max);
      row.observed_order = observed_order(rep.rows[i - 1].max_error, row.max_error, ratio);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

struct StabilityRow {
  double dt = 0.0;
  double max_abs_u = 0.0;
  bool bounded = false;   ///< E_n <= E_0 (1 + 1e-10) for all n
  bool monotone = false;  ///< E_{n+1} <= E_n (1 + 1e-12) for all n
};

/// Runs the homogeneous variant of the configured example for each dt.
inline std::vector<StabilityRow> stability_stress(RunConfig cfg, const std::vector<double>& dts) {
  cfg.homogeneous = true;
  cfg.min_steps = std::max<std::size_t>(cfg.min_steps, 4);
  std::vector<StabilityRow> out;
  for (double dt : dts) {
    cfg.dt = dt;
    const RunSummary s = run(cfg);
    out.push_back({dt, s.max_abs_u, s.energy_ratio <= 1.0 + 1e-10, s.energy_monotone.value_or(false)});
  }
  return out;
}

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV with a fixed header; wall_seconds is the only nondeterministic column.
inline void write_csv(const ErrorReport& rep, std::ostream& out) {
  out << "level,J_max,dt,max_error,observed_order,energy_monotone,wall_seconds\n";
  for (const ErrorRow& r : rep.rows) {
    out << r.level << ',' << r.j_max << ',' << format_number(r.dt) << ','
        << format_number(r.max_error) << ','
        << (r.observed_order ? format_number(*r.observed_order) : std::string()) << ','
        << (r.energy_monotone ? (*r.energy_monotone ? "true" : "false") : "n/a") << ','
        << format_number(r.wall_seconds) << '\n';
  }
}

}  // namespace mmfd
