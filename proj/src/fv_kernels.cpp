// SPDX-License-Identifier: Apache-2.0
//
// OpenMP finite-volume residual. The serial reference lives in
// serial_reference.cpp and is kept for cross-checking.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tsdmd/hf_solver.hpp"

namespace tsdmd {

namespace {

// Flux through the interface between b and c given the 4-point stencil a,b,c,d
// (one array per component).
inline State muscl_flux(ProblemKind kind, int axis, int nc, const State& a, const State& b,
                        const State& c, const State& d) {
  State uL{}, uR{};
  for (int k = 0; k < nc; ++k) {
    uL[k] = b[k] + 0.5 * limited_slope(a[k], b[k], c[k]);
    uR[k] = c[k] - 0.5 * limited_slope(b[k], c[k], d[k]);
  }
  const double alpha = std::max(max_wavespeed(kind, uL), max_wavespeed(kind, uR));
  const State fl = physical_flux(kind, axis, uL);
  const State fr = physical_flux(kind, axis, uR);
  State f{};
  for (int k = 0; k < nc; ++k) f[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * alpha * (uR[k] - uL[k]);
  return f;
}

}  // namespace

void fv_residual(ProblemKind kind, const Grid& grid, double ubc, std::span<const double> u,
                 std::span<double> rhs) {
  const int nc = components_of(kind);
  const int nx = grid.cells(0);
  const bool two_d = grid.dim() == 2;
  const int ny = two_d ? grid.cells(1) : 1;
  const int gy = two_d ? 2 : 0;
  const int px = nx + 4, py = ny + 2 * gy;
  const std::size_t N = grid.num_cells();

  // padded state with Dirichlet ghosts, one State per padded cell
  std::vector<State> pad(static_cast<std::size_t>(px) * py, State{ubc, ubc});
  auto at = [&](int i, int j) -> State& { return pad[static_cast<std::size_t>(j + gy) * px + (i + 2)]; };
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      State s{};
      for (int k = 0; k < nc; ++k) s[k] = u[k * N + grid.cell_index(i, j)];
      at(i, j) = s;
    }

  const double inv_hx = 1.0 / grid.h(0);
#pragma omp parallel
  {
    std::vector<State> fx(nx + 1);
#pragma omp for schedule(static)
    for (int j = 0; j < ny; ++j) {
      // interface i - 1/2 for i = 0..nx
      for (int i = 0; i <= nx; ++i)
        fx[i] = muscl_flux(kind, 0, nc, at(i - 2, j), at(i - 1, j), at(i, j), at(i + 1, j));
      for (int i = 0; i < nx; ++i)
        for (int k = 0; k < nc; ++k) rhs[k * N + grid.cell_index(i, j)] = -(fx[i + 1][k] - fx[i][k]) * inv_hx;
    }
  }
  if (!two_d) return;

  // y fluxes for interface rows j - 1/2, j = 0..ny
  std::vector<State> fy(static_cast<std::size_t>(ny + 1) * nx);
#pragma omp parallel for schedule(static)
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i)
      fy[static_cast<std::size_t>(j) * nx + i] =
          muscl_flux(kind, 1, nc, at(i, j - 2), at(i, j - 1), at(i, j), at(i, j + 1));
  const double inv_hy = 1.0 / grid.h(1);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      for (int k = 0; k < nc; ++k)
        rhs[k * N + grid.cell_index(i, j)] -=
            (fy[static_cast<std::size_t>(j + 1) * nx + i][k] - fy[static_cast<std::size_t>(j) * nx + i][k]) * inv_hy;
}

double cfl_time_step(ProblemKind kind, const Grid& grid, std::span<const double> u, double cfl) {
  const std::size_t N = grid.num_cells();
  double alpha = 0.0;
  if (kind == ProblemKind::burgers2d) {
#pragma omp parallel for reduction(max : alpha) schedule(static)
    for (std::size_t i = 0; i < N; ++i) alpha = std::max(alpha, std::abs(u[i]));
    if (!std::isfinite(alpha)) return std::nan("");
  } else {
    alpha = max_wavespeed(kind, State{});
  }
  if (alpha == 0.0) return std::numeric_limits<double>::infinity();
  double denom = alpha / grid.h(0);
  if (grid.dim() == 2) denom += alpha / grid.h(1);
  return cfl / denom;
}

}  // namespace tsdmd
