// SPDX-License-Identifier: Apache-2.0
//
// Plain DMD: truncated SVD of S_{1,K-1}, POD-reduced best-fit operator
// A_n = U_n^T S_{2,K} V_n Sigma_n^{-1}, its eigendecomposition, and the
// equation-free predictor U_n W exp(omega (t - t0)) b.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tsdmd {

struct SnapshotMatrix {
  Eigen::MatrixXd data;  // rows = state dimension, cols = time instances
  double t0 = 0.0;
  double dt = 1.0;

  std::size_t rows() const { return static_cast<std::size_t>(data.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(data.cols()); }
  void validate() const;
};

struct SVDTriple {
  Eigen::MatrixXd U;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd V;
  bool rank_deficient = false;  // requested rank exceeds numerical rank
};

/// Best rank-n factorization of X. Tall X goes through a Householder QR and
/// the SVD of the small triangular factor; other shapes use a dense SVD.
SVDTriple truncated_svd(const Eigen::Ref<const Eigen::MatrixXd>& X, int n);

struct DMDOptions {
  double sigma_drop = 1e-12;   // drop modes with sigma / sigma_1 below this
  double lambda_drop = 1e-12;  // drop modes with |lambda| below this
  double cond_limit = 1e12;    // W condition number triggering regularized amplitudes
};

struct DMDModel {
  Eigen::MatrixXd basis;  // U_n, N x r
  Eigen::MatrixXcd W;     // r x r eigenvectors of A_n
  Eigen::VectorXcd lambda;
  Eigen::VectorXcd omega;
  Eigen::VectorXcd b;
  Eigen::VectorXd sigma;  // retained singular values
  std::vector<char> dropped;
  double t0 = 0.0;
  double dt = 1.0;
  int requested_rank = 0;
  DMDOptions thresholds;
  bool rank_deficient = false;
  bool ill_conditioned = false;

  int rank() const { return static_cast<int>(basis.cols()); }
  std::size_t state_dim() const { return static_cast<std::size_t>(basis.rows()); }
};

DMDModel fit(const SnapshotMatrix& S, int n, const DMDOptions& opts = {});

/// Same as fit() but reuses a precomputed SVD of S_{1,K-1} with at least n columns.
DMDModel fit_with_svd(const SnapshotMatrix& S, const SVDTriple& svd, int n,
                      const DMDOptions& opts = {});

/// Reduced-space coefficients W diag(exp(omega (t - t0))) b.
Eigen::VectorXcd modal_coefficients(const DMDModel& model, double t);

/// Real part of the prediction at time t, written into out (size N).
void predict_into(const DMDModel& model, double t, std::span<double> out);
Eigen::VectorXd predict(const DMDModel& model, double t);

/// Full complex prediction (for checking the conjugate symmetry of real data).
Eigen::VectorXcd predict_complex(const DMDModel& model, double t);

/// Relative residual ||W b - U_n^T F(t_1)|| / ||U_n^T F(t_1)||.
double amplitude_residual(const DMDModel& model, const Eigen::VectorXd& first_snapshot);

}  // namespace tsdmd
