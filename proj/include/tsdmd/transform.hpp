// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "tsdmd/hf_solver.hpp"
#include "tsdmd/mesh.hpp"
#include "tsdmd/registration.hpp"

namespace tsdmd {

/// phi(x) = x - Psi(x), clamped to the closed domain.
Point forward_eval(const DisplacementField& field, const Point& x);

/// det(grad phi) at x.
double forward_jacobian_det(const DisplacementField& field, const Point& x);

/// Minimum of det(grad phi) over cell centers.
double min_forward_jacobian(const DisplacementField& field, const Grid& grid);

/// g(x_i) = u_t(phi(x_i)) at every cell center (multilinear lookup).
CellField transformed_snapshot(const CellField& u_t, const DisplacementField& field);

struct InversionOptions {
  int max_newton = 50;
  double rel_tolerance = 1e-10;  // residual tolerance relative to diam(Omega)
};

struct VertexInversion {
  VertexField field;
  std::vector<std::size_t> flagged;  // vertices that needed the fallback or missed tolerance
  double max_residual = 0.0;
  double min_forward_det = 1.0;
  bool diffeomorphic = true;  // min det(grad phi) > 0 at cell centers
};

/// Solves phi(x) = x_hat for every vertex x_hat (damped Newton from x_hat,
/// multi-start fallback); boundary vertices map to themselves.
VertexInversion invert_at_vertices(const DisplacementField& field, const Grid& grid,
                                   const InversionOptions& opts = {});

/// Minimum Jacobian determinant of the multilinear interpolant, sampled at
/// element centers (and element corners in 2D).
double min_jacobian(const VertexField& phi_tilde);

struct TransformedSnapshotSet {
  Grid grid;
  std::vector<double> times;
  std::vector<CellField> g;
  std::vector<VertexField> phi_tilde;
  std::size_t flagged_vertices = 0;
  double min_forward_det = 1.0;
};

TransformedSnapshotSet transform_snapshots(const SnapshotSet& snaps, const TransformSet& transforms,
                                           const InversionOptions& opts = {});

}  // namespace tsdmd
