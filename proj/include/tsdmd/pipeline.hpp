// SPDX-License-Identifier: Apache-2.0
//
// Offline/online TS-DMD: one DMD model for the transformed snapshots G, one
// for the de-transformer vertex values, recomposed as u_n = g_n(phi~_n(x)).

#pragma once

#include <span>
#include <string>
#include <vector>

#include "tsdmd/dmd.hpp"
#include "tsdmd/mesh.hpp"

namespace tsdmd {

/// Stacks cell fields (component-major) as columns; fields must share a grid.
SnapshotMatrix cell_snapshot_matrix(std::span<const CellField> fields, double t0, double dt);
SnapshotMatrix vertex_snapshot_matrix(std::span<const VertexField> fields, double t0, double dt);

/// Exact inverses of the column layout above.
CellField unflatten_cells(const Grid& grid, int components, std::span<const double> column);
VertexField unflatten_vertices(const Grid& grid, std::span<const double> column);

/// What is subtracted from the phi~ snapshots before DMD (and added back online).
enum class PhiOffset { none, identity, mean };
std::string to_string(PhiOffset offset);
PhiOffset phi_offset_from_string(const std::string& name);

struct OfflineOptions {
  int phi_rank = 0;  // 0: same rank as G
  PhiOffset phi_offset = PhiOffset::none;
  DMDOptions dmd;
};

struct TSDMDModel {
  DMDModel dmd_g;
  DMDModel dmd_phi;
  Grid grid;
  int components = 1;
  int n = 0;
  PhiOffset phi_offset_kind = PhiOffset::none;
  Eigen::VectorXd phi_offset;  // empty unless phi_offset_kind != none
  InterpMode mode = InterpMode::multilinear;
};

TSDMDModel offline(const SnapshotMatrix& g_snaps, const SnapshotMatrix& phi_snaps, const Grid& grid,
                   int components, int n, const OfflineOptions& opts = {});

/// Reduced de-transformer at t. When admissible, boundary vertices are pinned
/// to themselves and all values clamped to the closed domain; otherwise the
/// raw DMD output (plus offset) is returned.
VertexField online_phi(const TSDMDModel& model, double t, bool admissible = true);

/// Reduced transformed solution at t.
CellField online_g(const TSDMDModel& model, double t);

/// u_n(x_i) = g_n(phi~_n(x_i)) at every cell center.
CellField compose(const CellField& g, const VertexField& phi_tilde);

CellField online(const TSDMDModel& model, double t);
std::vector<CellField> online_batch(const TSDMDModel& model, std::span<const double> times);

/// Standard DMD on raw solution snapshots.
DMDModel baseline(const SnapshotMatrix& u_snaps, int n, const DMDOptions& opts = {});
CellField predict_field(const DMDModel& model, const Grid& grid, int components, double t);

}  // namespace tsdmd
