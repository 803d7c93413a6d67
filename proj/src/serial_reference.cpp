// SPDX-License-Identifier: Apache-2.0
#include "tsdmd/serial_reference.hpp"

#include <algorithm>
#include <cmath>

#include "tsdmd/errors.hpp"

namespace tsdmd::serial {

namespace {

double van_leer_limiter_ratio(double a, double b, double c) {
  if (b == a) return 0.0;
  return van_leer_limiter((c - b) / (b - a)) * (b - a);
}

}  // namespace

void fv_residual(ProblemKind kind, const Grid& grid, double ubc, std::span<const double> u,
                 std::span<double> rhs) {
  const int nc = components_of(kind);
  const int nx = grid.cells(0);
  const int ny = grid.dim() == 2 ? grid.cells(1) : 1;
  const int gy = grid.dim() == 2 ? 2 : 0;  // ghost layers along y
  const int px = nx + 4, py = ny + 2 * gy;
  const std::size_t N = grid.num_cells();

  // padded copy with Dirichlet ghosts
  std::vector<double> pad(static_cast<std::size_t>(nc) * px * py, ubc);
  auto P = [&](int k, int i, int j) -> double& {
    return pad[(static_cast<std::size_t>(k) * py + (j + gy)) * px + (i + 2)];
  };
  for (int k = 0; k < nc; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) P(k, i, j) = u[k * N + grid.cell_index(i, j)];

  std::fill(rhs.begin(), rhs.end(), 0.0);
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const int di = axis == 0 ? 1 : 0, dj = axis == 1 ? 1 : 0;
    const double h = grid.h(axis);
    // interfaces between (i-di, j-dj) and (i, j)
    const int ilo = 0, ihi = nx + di, jlo = 0, jhi = ny + dj;
    for (int j = jlo; j < jhi; ++j) {
      for (int i = ilo; i < ihi; ++i) {
        State uL{}, uR{};
        for (int k = 0; k < nc; ++k) {
          const double a = P(k, i - 2 * di, j - 2 * dj), b = P(k, i - di, j - dj);
          const double c = P(k, i, j), d = P(k, i + di, j + dj);
          uL[k] = b + 0.5 * van_leer_limiter_ratio(a, b, c);
          uR[k] = c - 0.5 * van_leer_limiter_ratio(b, c, d);
        }
        const double alpha = std::max(max_wavespeed(kind, uL), max_wavespeed(kind, uR));
        const State F = llf_flux(kind, axis, uL, uR, alpha);
        for (int k = 0; k < nc; ++k) {
          if (i < nx && j < ny) rhs[k * N + grid.cell_index(i, j)] += F[k] / h;
          const int il = i - di, jl = j - dj;
          if (il >= 0 && jl >= 0) rhs[k * N + grid.cell_index(il, jl)] -= F[k] / h;
        }
      }
    }
  }
}

ObjectiveValue objective(const DisplacementField& field, const CellField& u_t, const CellField& u_ref,
                         double eps) {
  if (!(u_t.grid == u_ref.grid) || u_t.components != u_ref.components)
    throw ConfigError("serial objective: mismatched grids");
  const Grid& g = u_t.grid;
  const double vol = g.cell_volume();
  ObjectiveValue out;
  for (std::size_t i = 0; i < g.num_cells(); ++i) {
    const Point x = g.cell_center(i);
    const Point psi = displacement_eval(field, x);
    const Point y = g.clamp({x[0] - psi[0], x[1] - psi[1]});
    for (int c = 0; c < u_t.components; ++c) {
      const double r = eval_cell_field(u_t, c, y, InterpMode::multilinear) - u_ref.at(c, i);
      out.matching += vol * r * r;
    }
    const Point lap = displacement_laplacian(field, x);
    for (int c = 0; c < g.dim(); ++c) out.regularization += eps * vol * lap[c] * lap[c];
  }
  out.total = out.matching + out.regularization;
  return out;
}

std::vector<double> objective_gradient_fd(const DisplacementField& field, const CellField& u_t,
                                          const CellField& u_ref, double eps, double step) {
  std::vector<double> grad(field.coeffs.size());
  DisplacementField f = field;
  for (std::size_t k = 0; k < grad.size(); ++k) {
    const double a = field.coeffs[k];
    f.coeffs[k] = a + step;
    const double fp = serial::objective(f, u_t, u_ref, eps).total;
    f.coeffs[k] = a - step;
    const double fm = serial::objective(f, u_t, u_ref, eps).total;
    f.coeffs[k] = a;
    grad[k] = (fp - fm) / (2.0 * step);
  }
  return grad;
}

CellField compose(const CellField& g, const VertexField& phi) {
  CellField u(g.grid, g.components);
  for (std::size_t i = 0; i < g.grid.num_cells(); ++i) {
    const Point y = g.grid.clamp(eval_vertex_field(phi, g.grid.cell_center(i)));
    for (int c = 0; c < g.components; ++c) u.at(c, i) = eval_cell_field(g, c, y, InterpMode::multilinear);
  }
  return u;
}

}  // namespace tsdmd::serial
