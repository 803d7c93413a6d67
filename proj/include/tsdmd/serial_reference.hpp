// SPDX-License-Identifier: Apache-2.0
//
// Straightforward single-threaded versions of the parallel kernels, kept as
// test oracles and benchmark baselines.

#pragma once

#include <span>
#include <vector>

#include "tsdmd/hf_solver.hpp"
#include "tsdmd/mesh.hpp"
#include "tsdmd/registration.hpp"

namespace tsdmd::serial {

void fv_residual(ProblemKind kind, const Grid& grid, double boundary_value,
                 std::span<const double> u, std::span<double> rhs);

/// Pointwise evaluation of the registration objective (no separable tables).
ObjectiveValue objective(const DisplacementField& field, const CellField& u_t,
                         const CellField& u_ref, double eps);

/// Central finite-difference gradient of objective() in the coefficients.
std::vector<double> objective_gradient_fd(const DisplacementField& field, const CellField& u_t,
                                          const CellField& u_ref, double eps, double step = 1e-6);

/// Composition through the generic point evaluators.
CellField compose(const CellField& g, const VertexField& phi_tilde);

}  // namespace tsdmd::serial
