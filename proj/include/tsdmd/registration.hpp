// SPDX-License-Identifier: Apache-2.0
//
// Snapshot registration: displacement fields Psi in the span of
// l_j(xi_1) l_k(xi_2) Upsilon(xi) (normalized coordinates), chosen to minimize
// the L2 mismatch of u_t(x - Psi(x)) against a reference snapshot plus a
// Laplacian penalty.

#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tsdmd/hf_solver.hpp"
#include "tsdmd/mesh.hpp"

namespace tsdmd {

struct DisplacementField {
  int dim = 1;
  int order = 1;  // M, per axis
  std::array<Interval, 2> box{};
  // coeffs[c * per_component() + j + M * k], j,k zero-based
  std::vector<double> coeffs;

  static DisplacementField zero(const Grid& grid, int order);
  std::size_t per_component() const;
  double& coeff(int c, int j, int k = 0) { return coeffs[c * per_component() + j + order * k]; }
  double coeff(int c, int j, int k = 0) const { return coeffs[c * per_component() + j + order * k]; }
  double norm() const;
};

/// l_j(xi_1) [l_k(xi_2)] Upsilon(xi) with 1-based indices; xi in [0,1]^d.
double basis_eval(int dim, int order, int j, int k, const Point& xi);

/// Psi(x) in physical units.
Point displacement_eval(const DisplacementField& field, const Point& x);

/// d Psi_c / d x_a in physical units, as jac[c][a].
std::array<std::array<double, 2>, 2> displacement_jacobian(const DisplacementField& field,
                                                           const Point& x);

/// Laplacian of each displacement component.
Point displacement_laplacian(const DisplacementField& field, const Point& x);

struct ObjectiveValue {
  double matching = 0.0;
  double regularization = 0.0;
  double total = 0.0;
  double penalty = 0.0;  // fold and proximal terms, included in total
};

/// weight * sum_i |I_i| max(0, floor - det grad phi(x_i))^2; off when weight == 0.
struct FoldPenalty {
  double floor = 0.0;
  double weight = 0.0;
};

/// Precomputed separable basis tables at cell centers for one grid and order.
class RegistrationKernel {
 public:
  RegistrationKernel(const Grid& grid, int order);

  const Grid& grid() const { return grid_; }
  int order() const { return order_; }
  std::size_t num_coeffs() const;

  /// Objective and (optionally) its gradient w.r.t. the coefficients.
  ObjectiveValue evaluate(std::span<const double> coeffs, const CellField& u_t,
                          const CellField& u_ref, double eps, std::span<double> grad,
                          const FoldPenalty& fold = {}) const;

  /// Psi component c at all cell centers (cell-index order).
  Eigen::MatrixXd displacement(std::span<const double> coeffs, int c) const;

  /// min over cell centers of det(grad phi), phi = Id - Psi.
  double min_forward_det(std::span<const double> coeffs) const;

 private:
  Grid grid_;
  int order_;
  int m2_;  // modes along axis 2 (1 in 1D)
  Eigen::MatrixXd b1_, b1d_, b1dd_, b2_, b2d_, b2dd_;
};

ObjectiveValue objective(const DisplacementField& field, const CellField& u_t,
                         const CellField& u_ref, double eps);

struct RegistrationOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-8;
  bool independent = false;     // register every snapshot from zero (parallel)
  bool escalate_order = false;  // grow M from 2 while matching improves > 10%
  FoldPenalty fold{0.1, 0.0};
  // mu ||a - a_init||^2 in normalized coefficients; keeps directions the data
  // does not determine at their warm-start values
  double proximal_weight = 0.1;
};

struct RegistrationResult {
  DisplacementField field;
  ObjectiveValue initial;
  ObjectiveValue final;
  int iterations = 0;
  bool warning = false;
};

/// Quasi-Newton (BFGS) minimization starting from init.
RegistrationResult register_snapshot(const CellField& u_t, const CellField& u_ref, int order,
                                     double eps, const DisplacementField& init,
                                     const RegistrationOptions& opts = {});
RegistrationResult register_snapshot(const RegistrationKernel& kernel, const CellField& u_t,
                                     const CellField& u_ref, double eps,
                                     const DisplacementField& init,
                                     const RegistrationOptions& opts = {});

struct TransformSet {
  double t_ref = 0.0;
  std::size_t ref_index = 0;  // snapshot used as the reference image
  int order = 1;
  double eps = 1e-3;
  std::vector<double> times;
  std::vector<DisplacementField> fields;
  std::vector<ObjectiveValue> objectives;
  std::vector<int> iterations;
  std::vector<char> warnings;

  std::size_t warning_count() const;
};

/// Index of the snapshot closest to t (earlier index on ties).
std::size_t closest_index(std::span<const double> times, double t);

/// Registers every snapshot against the one closest to t_ref, sweeping outward
/// from the reference and warm-starting from the previously solved neighbor.
TransformSet register_trajectory(const SnapshotSet& snaps, double t_ref, int order, double eps,
                                 const RegistrationOptions& opts = {});

/// Optional order escalation: returns the selected M <= max_order.
int select_order(const SnapshotSet& snaps, double t_ref, int max_order, double eps,
                 const RegistrationOptions& opts = {});

}  // namespace tsdmd
