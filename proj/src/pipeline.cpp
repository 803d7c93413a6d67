// SPDX-License-Identifier: Apache-2.0
#include "tsdmd/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "tsdmd/errors.hpp"

namespace tsdmd {

SnapshotMatrix cell_snapshot_matrix(std::span<const CellField> fields, double t0, double dt) {
  if (fields.empty()) throw ConfigError("snapshot matrix: no fields");
  SnapshotMatrix S;
  S.t0 = t0;
  S.dt = dt;
  S.data.resize(static_cast<Eigen::Index>(fields[0].values.size()), static_cast<Eigen::Index>(fields.size()));
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (!(fields[k].grid == fields[0].grid) || fields[k].components != fields[0].components)
      throw ConfigError("snapshot matrix: fields do not share a grid");
    S.data.col(static_cast<Eigen::Index>(k)) =
        Eigen::Map<const Eigen::VectorXd>(fields[k].values.data(), S.data.rows());
  }
  return S;
}

SnapshotMatrix vertex_snapshot_matrix(std::span<const VertexField> fields, double t0, double dt) {
  if (fields.empty()) throw ConfigError("snapshot matrix: no fields");
  SnapshotMatrix S;
  S.t0 = t0;
  S.dt = dt;
  S.data.resize(static_cast<Eigen::Index>(fields[0].values.size()), static_cast<Eigen::Index>(fields.size()));
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (!(fields[k].grid == fields[0].grid)) throw ConfigError("snapshot matrix: fields do not share a grid");
    S.data.col(static_cast<Eigen::Index>(k)) =
        Eigen::Map<const Eigen::VectorXd>(fields[k].values.data(), S.data.rows());
  }
  return S;
}

CellField unflatten_cells(const Grid& grid, int components, std::span<const double> column) {
  return CellField(grid, components, std::vector<double>(column.begin(), column.end()));
}

VertexField unflatten_vertices(const Grid& grid, std::span<const double> column) {
  return VertexField(grid, std::vector<double>(column.begin(), column.end()));
}

TSDMDModel offline(const SnapshotMatrix& g_snaps, const SnapshotMatrix& phi_snaps, const Grid& grid,
                   int components, int n, const OfflineOptions& opts) {
  if (g_snaps.cols() != phi_snaps.cols()) throw ConfigError("offline: G and phi~ snapshot counts differ");
  if (std::abs(g_snaps.dt - phi_snaps.dt) > 1e-12 * g_snaps.dt || std::abs(g_snaps.t0 - phi_snaps.t0) > 1e-12)
    throw ConfigError("offline: G and phi~ time grids differ");
  if (g_snaps.rows() != grid.num_cells() * static_cast<std::size_t>(components))
    throw ConfigError("offline: G state dimension does not match the grid");
  if (phi_snaps.rows() != grid.num_vertices() * static_cast<std::size_t>(grid.dim()))
    throw ConfigError("offline: phi~ state dimension does not match the grid");

  TSDMDModel m;
  m.grid = grid;
  m.components = components;
  m.n = n;
  m.phi_offset_kind = opts.phi_offset;
  m.dmd_g = fit(g_snaps, n, opts.dmd);
  const int nphi = opts.phi_rank > 0 ? opts.phi_rank : n;
  switch (opts.phi_offset) {
    case PhiOffset::none:
      break;
    case PhiOffset::identity: {
      const VertexField id = identity_vertex_field(grid);
      m.phi_offset = Eigen::Map<const Eigen::VectorXd>(id.values.data(), static_cast<Eigen::Index>(id.values.size()));
      break;
    }
    case PhiOffset::mean:
      m.phi_offset = phi_snaps.data.rowwise().mean();
      break;
  }
  if (m.phi_offset.size() > 0) {
    SnapshotMatrix shifted = phi_snaps;
    shifted.data.colwise() -= m.phi_offset;
    m.dmd_phi = fit(shifted, nphi, opts.dmd);
  } else {
    m.dmd_phi = fit(phi_snaps, nphi, opts.dmd);
  }
  return m;
}

std::string to_string(PhiOffset offset) {
  switch (offset) {
    case PhiOffset::none: return "none";
    case PhiOffset::identity: return "identity";
    case PhiOffset::mean: return "mean";
  }
  return "none";
}

PhiOffset phi_offset_from_string(const std::string& name) {
  if (name == "none") return PhiOffset::none;
  if (name == "identity") return PhiOffset::identity;
  if (name == "mean") return PhiOffset::mean;
  throw ConfigError("unknown phi offset '" + name + "'");
}

VertexField online_phi(const TSDMDModel& m, double t, bool admissible) {
  VertexField phi(m.grid);
  predict_into(m.dmd_phi, t, phi.values);
  const std::size_t nv = phi.size();
  if (m.phi_offset.size() > 0) Eigen::Map<Eigen::VectorXd>(phi.values.data(), m.phi_offset.size()) += m.phi_offset;
  if (admissible) {
    for (std::size_t v = 0; v < nv; ++v) {
      if (!m.grid.is_boundary_vertex(v)) continue;
      const Point p = m.grid.vertex(v);
      for (int c = 0; c < m.grid.dim(); ++c) phi.at(c, v) = p[c];
    }
    for (int c = 0; c < m.grid.dim(); ++c) {
      const Interval b = m.grid.bounds(c);
      for (std::size_t v = 0; v < nv; ++v) phi.at(c, v) = std::clamp(phi.at(c, v), b.lo, b.hi);
    }
  }
  return phi;
}

CellField online_g(const TSDMDModel& m, double t) {
  CellField g(m.grid, m.components);
  predict_into(m.dmd_g, t, g.values);
  return g;
}

CellField compose(const CellField& g, const VertexField& phi) {
  const Grid& grid = g.grid;
  if (!(phi.grid == grid)) throw ConfigError("compose: grids differ");
  CellField u(grid, g.components);
  const std::size_t N = grid.num_cells();
  const int nx = grid.cells(0);
  const bool two_d = grid.dim() == 2;
#pragma omp parallel for schedule(static)
  for (std::size_t cell = 0; cell < N; ++cell) {
    // cell centers are element midpoints: average of the element's vertices
    const int i = static_cast<int>(cell % nx);
    const int j = static_cast<int>(cell / nx);
    Point x{0.0, 0.0};
    if (two_d) {
      const std::size_t v00 = grid.vertex_index(i, j), v10 = grid.vertex_index(i + 1, j);
      const std::size_t v01 = grid.vertex_index(i, j + 1), v11 = grid.vertex_index(i + 1, j + 1);
      for (int c = 0; c < 2; ++c)
        x[c] = 0.25 * (phi.at(c, v00) + phi.at(c, v10) + phi.at(c, v01) + phi.at(c, v11));
    } else {
      x[0] = 0.5 * (phi.at(0, i) + phi.at(0, i + 1));
    }
    const InterpStencil st = cell_stencil(grid, grid.clamp(x));
    for (int c = 0; c < g.components; ++c) {
      const auto gv = g.component(c);
      double v = 0.0;
      for (int s = 0; s < st.count; ++s) v += st.weight[s] * gv[st.cell[s]];
      u.at(c, cell) = v;
    }
  }
  return u;
}

CellField online(const TSDMDModel& m, double t) { return compose(online_g(m, t), online_phi(m, t)); }

std::vector<CellField> online_batch(const TSDMDModel& m, std::span<const double> times) {
  std::vector<CellField> out(times.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < times.size(); ++k) out[k] = online(m, times[k]);
  return out;
}

DMDModel baseline(const SnapshotMatrix& u_snaps, int n, const DMDOptions& opts) {
  return fit(u_snaps, n, opts);
}

CellField predict_field(const DMDModel& model, const Grid& grid, int components, double t) {
  CellField u(grid, components);
  predict_into(model, t, u.values);
  return u;
}

}  // namespace tsdmd
