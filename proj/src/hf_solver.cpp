// SPDX-License-Identifier: Apache-2.0
#include "tsdmd/hf_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "tsdmd/errors.hpp"
#include "tsdmd/serial_reference.hpp"

namespace tsdmd {

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::advection1d: return "advection1d";
    case ProblemKind::wave1d: return "wave1d";
    case ProblemKind::burgers2d: return "burgers2d";
  }
  return "unknown";
}

ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "advection1d") return ProblemKind::advection1d;
  if (name == "wave1d") return ProblemKind::wave1d;
  if (name == "burgers2d") return ProblemKind::burgers2d;
  throw ConfigError("unknown problem kind '" + name + "'");
}

std::string to_string(WaveOrientation orientation) {
  return orientation == WaveOrientation::inward ? "inward" : "outward";
}

WaveOrientation wave_orientation_from_string(const std::string& name) {
  if (name == "inward") return WaveOrientation::inward;
  if (name == "outward") return WaveOrientation::outward;
  throw ConfigError("unknown wave orientation '" + name + "'");
}

int components_of(ProblemKind kind) { return kind == ProblemKind::wave1d ? 2 : 1; }
int dimension_of(ProblemKind kind) { return kind == ProblemKind::burgers2d ? 2 : 1; }

ProblemSpec advection_problem() {
  ProblemSpec p;
  p.kind = ProblemKind::advection1d;
  p.domain = {Interval{-0.2, 2.0}, Interval{0.0, 1.0}};
  p.final_time = 0.8;
  IndicatorTerm step;
  step.box[0] = {-0.2, 0.3};
  p.initial.components = {{step}};
  return p;
}

ProblemSpec wave_problem(WaveOrientation orientation) {
  ProblemSpec p;
  p.kind = ProblemKind::wave1d;
  p.domain = {Interval{-0.3, 3.0}, Interval{0.0, 1.0}};
  p.final_time = 0.6;
  const double s = 1.0 / std::numbers::sqrt2;
  // w1 on [delta1 - 0.5, delta1], w2 on [delta2 - 0.5, delta2]
  IndicatorTerm w1;
  w1.box[0] = {-0.2, 0.3};
  w1.sines = {RaisedSine{0, 0.2}};
  IndicatorTerm w2;
  w2.box[0] = {2.3, 2.8};
  w2.sines = {RaisedSine{0, -2.3}};
  IndicatorTerm w1p = w1, w1m = w1, w2p = w2, w2m = w2;
  w1p.scale = s;
  w1m.scale = -s;
  w2p.scale = s;
  w2m.scale = -s;
  if (orientation == WaveOrientation::outward) {
    p.initial.components = {{w1p, w2p}, {w1m, w2p}};
  } else {
    p.initial.components = {{w1p, w2p}, {w1p, w2m}};
  }
  return p;
}

ProblemSpec burgers_problem() {
  ProblemSpec p;
  p.kind = ProblemKind::burgers2d;
  p.domain = {Interval{-0.1, 1.4}, Interval{-0.1, 1.4}};
  p.final_time = 1.0;
  IndicatorTerm box;
  box.box = {Interval{0.0, 0.5}, Interval{0.0, 0.5}};
  p.initial.components = {{box}};
  return p;
}

State physical_flux(ProblemKind kind, int /*axis*/, const State& u) {
  switch (kind) {
    case ProblemKind::advection1d: return {u[0], 0.0};
    case ProblemKind::wave1d: return {u[1], u[0]};
    case ProblemKind::burgers2d: return {0.5 * u[0] * u[0], 0.0};
  }
  return {};
}

double max_wavespeed(ProblemKind kind, const State& u) {
  return kind == ProblemKind::burgers2d ? std::abs(u[0]) : 1.0;
}

State llf_flux(ProblemKind kind, int axis, const State& uL, const State& uR, double alpha) {
  const int nc = components_of(kind);
  for (int k = 0; k < nc; ++k)
    if (!std::isfinite(uL[k]) || !std::isfinite(uR[k]))
      throw NumericalError("llf_flux: non-finite state");
  if (!std::isfinite(alpha)) throw NumericalError("llf_flux: non-finite wavespeed");
  const State fl = physical_flux(kind, axis, uL);
  const State fr = physical_flux(kind, axis, uR);
  State f{};
  for (int k = 0; k < nc; ++k) f[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * alpha * (uR[k] - uL[k]);
  return f;
}

double van_leer_limiter(double r) {
  const double ar = std::abs(r);
  return (r + ar) / (1.0 + ar);
}

std::vector<double> uniform_times(double t0, double t1, int K) {
  std::vector<double> t(K);
  for (int k = 0; k < K; ++k) t[k] = K == 1 ? t0 : t0 + (t1 - t0) * k / (K - 1);
  if (K > 1) t.back() = t1;
  return t;
}

SnapshotSet solve_at(const ProblemSpec& problem, const Grid& grid, std::span<const double> times,
                     const SolverOptions& opts) {
  if (grid.dim() != problem.dim()) throw ConfigError("solve: grid dimension does not match problem");
  for (int a = 0; a < grid.dim(); ++a)
    if (std::abs(grid.bounds(a).lo - problem.domain[a].lo) > 1e-12 ||
        std::abs(grid.bounds(a).hi - problem.domain[a].hi) > 1e-12)
      throw ConfigError("solve: grid bounds do not match problem domain");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0) || (k > 0 && times[k] < times[k - 1]))
      throw ConfigError("solve: output times must be non-negative and sorted");
  }

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  SnapshotSet out;
  out.grid = grid;
  out.problem = to_string(problem.kind);
  out.cfl = opts.cfl;

  CellField u = project_to_cells(problem.initial, grid);
  if (u.components != problem.components())
    throw ConfigError("solve: initial data component count does not match problem");
  const std::size_t n = u.values.size();
  std::vector<double> k1(n), stage(n), k2(n);
  auto residual = [&](std::span<const double> x, std::span<double> r) {
    if (opts.serial_kernels)
      serial::fv_residual(problem.kind, grid, problem.boundary_value, x, r);
    else
      fv_residual(problem.kind, grid, problem.boundary_value, x, r);
  };

  double t = 0.0;
  for (double target : times) {
    while (t < target) {
      double dt = cfl_time_step(problem.kind, grid, u.values, opts.cfl);
      if (!std::isfinite(dt) && !std::isinf(dt))
        throw NumericalError("solve: non-finite wavespeed at t = " + std::to_string(t));
      const bool last = dt >= target - t;
      if (last) dt = target - t;
      if (dt <= 1e-14 * std::max(1.0, target) && !last)
        throw NumericalError("solve: CFL step underflow at t = " + std::to_string(t));
      // Heun: u1 = u + dt L(u); u <- (u + u1 + dt L(u1)) / 2
      residual(u.values, k1);
#pragma omp parallel for schedule(static)
      for (std::size_t i = 0; i < n; ++i) stage[i] = u.values[i] + dt * k1[i];
      residual(stage, k2);
#pragma omp parallel for schedule(static)
      for (std::size_t i = 0; i < n; ++i)
        u.values[i] = 0.5 * (u.values[i] + stage[i] + dt * k2[i]);
      t = last ? target : t + dt;
      ++out.steps;
    }
    for (double v : u.values)
      if (!std::isfinite(v)) throw NumericalError("solve: non-finite state at t = " + std::to_string(t));
    out.times.push_back(target);
    out.fields.push_back(u);
    out.wall_clock.push_back(std::chrono::duration<double>(clock::now() - start).count());
  }
  return out;
}

SnapshotSet solve(const ProblemSpec& problem, const Grid& grid, int K, const SolverOptions& opts) {
  if (K < 2) throw ConfigError("solve: need at least two snapshots");
  if (!(problem.final_time > 0.0)) throw ConfigError("solve: final time must be positive");
  const std::vector<double> t = uniform_times(0.0, problem.final_time, K);
  return solve_at(problem, grid, t, opts);
}

}  // namespace tsdmd
