// SPDX-License-Identifier: Apache-2.0
#include "tsdmd/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tsdmd/errors.hpp"

namespace tsdmd {

Point forward_eval(const DisplacementField& field, const Point& x) {
  const Point psi = displacement_eval(field, x);
  Point y{x[0] - psi[0], field.dim == 2 ? x[1] - psi[1] : 0.0};
  for (int a = 0; a < field.dim; ++a) y[a] = std::clamp(y[a], field.box[a].lo, field.box[a].hi);
  return y;
}

double forward_jacobian_det(const DisplacementField& field, const Point& x) {
  const auto j = displacement_jacobian(field, x);
  if (field.dim == 1) return 1.0 - j[0][0];
  return (1.0 - j[0][0]) * (1.0 - j[1][1]) - j[0][1] * j[1][0];
}

double min_forward_jacobian(const DisplacementField& field, const Grid& grid) {
  double m = std::numeric_limits<double>::infinity();
  const std::size_t N = grid.num_cells();
#pragma omp parallel for reduction(min : m) schedule(static)
  for (std::size_t i = 0; i < N; ++i) m = std::min(m, forward_jacobian_det(field, grid.cell_center(i)));
  return m;
}

CellField transformed_snapshot(const CellField& u_t, const DisplacementField& field) {
  if (field.dim != u_t.grid.dim()) throw ConfigError("transformed_snapshot: dimension mismatch");
  const Grid& grid = u_t.grid;
  const RegistrationKernel kernel(grid, field.order);
  std::array<Eigen::MatrixXd, 2> psi;
  for (int c = 0; c < grid.dim(); ++c) psi[c] = kernel.displacement(field.coeffs, c);
  CellField g(grid, u_t.components);
  const std::size_t N = grid.num_cells();
  const int n1 = grid.cells(0);
#pragma omp parallel for schedule(static)
  for (std::size_t cell = 0; cell < N; ++cell) {
    const int i = static_cast<int>(cell % n1);
    const int k = static_cast<int>(cell / n1);
    const Point x = grid.cell_center(cell);
    const Point y = grid.clamp({x[0] - psi[0](i, k), grid.dim() == 2 ? x[1] - psi[1](i, k) : 0.0});
    const InterpStencil st = cell_stencil(grid, y);
    for (int c = 0; c < u_t.components; ++c) {
      const auto u = u_t.component(c);
      double v = 0.0;
      for (int s = 0; s < st.count; ++s) v += st.weight[s] * u[st.cell[s]];
      g.at(c, cell) = v;
    }
  }
  return g;
}

namespace {

struct NewtonOutcome {
  Point x{};
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
};

double residual_norm(const DisplacementField& f, const Point& x, const Point& target, Point& r) {
  const Point psi = displacement_eval(f, x);
  double s = 0.0;
  for (int a = 0; a < f.dim; ++a) {
    r[a] = x[a] - psi[a] - target[a];
    s += r[a] * r[a];
  }
  return std::sqrt(s);
}

Point clamp_box(const DisplacementField& f, Point x) {
  for (int a = 0; a < f.dim; ++a) x[a] = std::clamp(x[a], f.box[a].lo, f.box[a].hi);
  return x;
}

NewtonOutcome damped_newton(const DisplacementField& f, const Point& target, Point x, int max_iter,
                            double tol) {
  NewtonOutcome out;
  Point r{};
  double rn = residual_norm(f, x, target, r);
  for (int it = 0; it < max_iter && rn > tol; ++it) {
    const auto jp = displacement_jacobian(f, x);
    Point dx{};
    if (f.dim == 1) {
      const double j = 1.0 - jp[0][0];
      if (j == 0.0) break;
      dx[0] = -r[0] / j;
    } else {
      const double a = 1.0 - jp[0][0], b = -jp[0][1], c = -jp[1][0], d = 1.0 - jp[1][1];
      const double det = a * d - b * c;
      if (det == 0.0) break;
      dx[0] = -(d * r[0] - b * r[1]) / det;
      dx[1] = -(-c * r[0] + a * r[1]) / det;
    }
    double step = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls) {
      Point trial = clamp_box(f, {x[0] + step * dx[0], x[1] + step * dx[1]});
      Point rt{};
      const double tn = residual_norm(f, trial, target, rt);
      if (tn < rn) {
        x = trial;
        r = rt;
        rn = tn;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  out.x = x;
  out.residual = rn;
  out.converged = rn <= tol;
  return out;
}

NewtonOutcome multi_start(const DisplacementField& f, const Point& target, int max_iter, double tol) {
  constexpr int lattice = 11;
  struct Candidate {
    Point x;
    double r;
  };
  std::vector<Candidate> cands;
  const int ny = f.dim == 2 ? lattice : 1;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < lattice; ++i) {
      Point x{f.box[0].lo + f.box[0].length() * i / (lattice - 1),
              f.dim == 2 ? f.box[1].lo + f.box[1].length() * j / (lattice - 1) : 0.0};
      Point r{};
      cands.push_back({x, residual_norm(f, x, target, r)});
    }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.r < b.r; });
  NewtonOutcome best;
  for (std::size_t c = 0; c < std::min<std::size_t>(3, cands.size()); ++c) {
    const NewtonOutcome o = damped_newton(f, target, cands[c].x, max_iter, tol);
    if (o.residual < best.residual) best = o;
  }
  return best;
}

}  // namespace

VertexInversion invert_at_vertices(const DisplacementField& field, const Grid& grid,
                                   const InversionOptions& opts) {
  if (field.dim != grid.dim()) throw ConfigError("invert_at_vertices: dimension mismatch");
  VertexInversion out;
  out.field = VertexField(grid);
  out.min_forward_det = min_forward_jacobian(field, grid);
  out.diffeomorphic = out.min_forward_det > 0.0;
  const double tol = opts.rel_tolerance * grid.diameter();
  const std::size_t nv = grid.num_vertices();
  std::vector<double> residual(nv, 0.0);
  std::vector<char> flag(nv, 0);

#pragma omp parallel for schedule(dynamic, 256)
  for (std::size_t v = 0; v < nv; ++v) {
    const Point target = grid.vertex(v);
    Point x = target;  // Psi vanishes on the boundary, so boundary vertices are fixed
    if (!grid.is_boundary_vertex(v)) {
      NewtonOutcome o = damped_newton(field, target, target, opts.max_newton, tol);
      if (!o.converged) {
        const NewtonOutcome alt = multi_start(field, target, opts.max_newton, tol);
        if (alt.residual < o.residual) o = alt;
        flag[v] = 1;
      }
      x = o.x;
      residual[v] = o.residual;
    }
    for (int c = 0; c < grid.dim(); ++c) out.field.at(c, v) = x[c];
  }
  for (std::size_t v = 0; v < nv; ++v) {
    out.max_residual = std::max(out.max_residual, residual[v]);
    if (flag[v] || residual[v] > tol) out.flagged.push_back(v);
  }
  return out;
}

double min_jacobian(const VertexField& f) {
  const Grid& g = f.grid;
  double m = std::numeric_limits<double>::infinity();
  if (g.dim() == 1) {
    for (int i = 0; i < g.cells(0); ++i) m = std::min(m, (f.at(0, i + 1) - f.at(0, i)) / g.h(0));
    return m;
  }
  const int nx = g.cells(0), ny = g.cells(1);
  const double hx = g.h(0), hy = g.h(1);
#pragma omp parallel for reduction(min : m) schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t v00 = g.vertex_index(i, j), v10 = g.vertex_index(i + 1, j);
      const std::size_t v01 = g.vertex_index(i, j + 1), v11 = g.vertex_index(i + 1, j + 1);
      // bilinear map on the reference square, derivatives at (s,t)
      auto det_at = [&](double s, double t) {
        double J[2][2];
        for (int c = 0; c < 2; ++c) {
          J[c][0] = ((1 - t) * (f.at(c, v10) - f.at(c, v00)) + t * (f.at(c, v11) - f.at(c, v01))) / hx;
          J[c][1] = ((1 - s) * (f.at(c, v01) - f.at(c, v00)) + s * (f.at(c, v11) - f.at(c, v10))) / hy;
        }
        return J[0][0] * J[1][1] - J[0][1] * J[1][0];
      };
      double e = det_at(0.5, 0.5);
      e = std::min({e, det_at(0, 0), det_at(1, 0), det_at(0, 1), det_at(1, 1)});
      m = std::min(m, e);
    }
  }
  return m;
}

TransformedSnapshotSet transform_snapshots(const SnapshotSet& snaps, const TransformSet& transforms,
                                           const InversionOptions& opts) {
  if (snaps.fields.size() != transforms.fields.size())
    throw ConfigError("transform_snapshots: snapshot/transform count mismatch");
  TransformedSnapshotSet out;
  out.grid = snaps.grid;
  out.times = snaps.times;
  out.g.reserve(snaps.fields.size());
  out.phi_tilde.reserve(snaps.fields.size());
  for (std::size_t k = 0; k < snaps.fields.size(); ++k) {
    out.g.push_back(transformed_snapshot(snaps.fields[k], transforms.fields[k]));
    VertexInversion inv = invert_at_vertices(transforms.fields[k], snaps.grid, opts);
    out.flagged_vertices += inv.flagged.size();
    out.min_forward_det = std::min(out.min_forward_det, inv.min_forward_det);
    out.phi_tilde.push_back(std::move(inv.field));
  }
  return out;
}

}  // namespace tsdmd
