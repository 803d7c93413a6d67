// SPDX-License-Identifier: Apache-2.0
//
// Second-order finite-volume solver (MUSCL + van Leer slopes, local
// Lax-Friedrichs flux, Heun time stepping) for the benchmark conservation laws.

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "tsdmd/mesh.hpp"

namespace tsdmd {

enum class ProblemKind { advection1d, wave1d, burgers2d };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& name);

/// Number of solution components (1, 2, 1) and spatial dimension (1, 1, 2).
int components_of(ProblemKind kind);
int dimension_of(ProblemKind kind);

using State = std::array<double, 2>;

struct ProblemSpec {
  ProblemKind kind = ProblemKind::advection1d;
  std::array<Interval, 2> domain{};
  double final_time = 1.0;
  InitialData initial;
  double boundary_value = 0.0;

  int components() const { return components_of(kind); }
  int dim() const { return dimension_of(kind); }
};

/// Which characteristic family carries each sine bump of the wave problem.
/// outward: u2 = (-w1 + w2)/sqrt2, so w1 travels left and w2 right and both
/// leave the domain around T. inward: u2 = (w1 - w2)/sqrt2, the bumps travel
/// toward each other and stay inside through the extrapolation window.
enum class WaveOrientation { inward, outward };
std::string to_string(WaveOrientation orientation);
WaveOrientation wave_orientation_from_string(const std::string& name);

/// Benchmark problems: advected step, wave system with windowed sine bumps,
/// 2D Burgers with a square pulse.
ProblemSpec advection_problem();
ProblemSpec wave_problem(WaveOrientation orientation = WaveOrientation::inward);
ProblemSpec burgers_problem();

State physical_flux(ProblemKind kind, int axis, const State& u);
double max_wavespeed(ProblemKind kind, const State& u);

/// 0.5 (f(uL) + f(uR)) - 0.5 alpha (uR - uL), componentwise.
State llf_flux(ProblemKind kind, int axis, const State& uL, const State& uR, double alpha);

/// (r + |r|) / (1 + |r|).
double van_leer_limiter(double r);

/// Limited slope phi(r) * (b - a) with r = (c - b) / (b - a); zero when b == a.
inline double limited_slope(double a, double b, double c) {
  const double dm = b - a;
  const double dp = c - b;
  if (dm == 0.0) return 0.0;
  const double r = dp / dm;
  const double ar = r < 0.0 ? -r : r;
  return (r + ar) / (1.0 + ar) * dm;
}

struct SolverOptions {
  double cfl = 0.5;
  bool serial_kernels = false;
};

struct SnapshotSet {
  Grid grid;
  std::vector<double> times;
  std::vector<CellField> fields;
  std::string problem;
  double cfl = 0.5;
  // cumulative wall-clock seconds from solve start to each output time
  std::vector<double> wall_clock;
  long steps = 0;

  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/// Evaluates the semi-discrete right-hand side d/dt u (component-major layout).
void fv_residual(ProblemKind kind, const Grid& grid, double boundary_value,
                 std::span<const double> u, std::span<double> rhs);

/// Stable explicit step for the current state.
double cfl_time_step(ProblemKind kind, const Grid& grid, std::span<const double> u, double cfl);

/// Solves to each requested output time (sorted, >= 0) landing exactly on it.
SnapshotSet solve_at(const ProblemSpec& problem, const Grid& grid, std::span<const double> times,
                     const SolverOptions& opts = {});

/// K uniformly spaced snapshots on [0, T] including both ends.
SnapshotSet solve(const ProblemSpec& problem, const Grid& grid, int K,
                  const SolverOptions& opts = {});

std::vector<double> uniform_times(double t0, double t1, int K);

}  // namespace tsdmd
