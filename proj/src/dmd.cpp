// SPDX-License-Identifier: Apache-2.0
#include "tsdmd/dmd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsdmd/errors.hpp"

namespace tsdmd {

void SnapshotMatrix::validate() const {
  if (data.cols() < 2) throw ConfigError("snapshot matrix: need at least two columns");
  if (!(dt > 0.0)) throw ConfigError("snapshot matrix: time step must be positive");
  if (!data.allFinite()) throw ConfigError("snapshot matrix: non-finite entries");
}

SVDTriple truncated_svd(const Eigen::Ref<const Eigen::MatrixXd>& X, int n) {
  const Eigen::Index rows = X.rows(), cols = X.cols();
  if (n < 1 || n > std::min(rows, cols))
    throw ConfigError("truncated_svd: rank must satisfy 1 <= n <= min(N, K-1)");
  SVDTriple out;
  if (rows > cols) {
    // X = Q R, then the small SVD of R
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    const Eigen::MatrixXd R = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    const Eigen::BDCSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.sigma = svd.singularValues().head(n);
    out.V = svd.matrixV().leftCols(n);
    out.U = Eigen::MatrixXd::Zero(rows, n);
    out.U.topRows(cols) = svd.matrixU().leftCols(n);
    out.U.applyOnTheLeft(qr.householderQ());
  } else {
    const Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.sigma = svd.singularValues().head(n);
    out.U = svd.matrixU().leftCols(n);
    out.V = svd.matrixV().leftCols(n);
  }
  const double s1 = out.sigma(0);
  out.rank_deficient = s1 == 0.0 || out.sigma(n - 1) < 1e-12 * s1;
  return out;
}

DMDModel fit_with_svd(const SnapshotMatrix& S, const SVDTriple& svd, int n, const DMDOptions& opts) {
  S.validate();
  const Eigen::Index K = S.data.cols();
  if (K < 3) throw ConfigError("dmd fit: need at least three snapshots");
  if (n < 1 || n > std::min<Eigen::Index>(S.data.rows(), K - 1))
    throw ConfigError("dmd fit: rank must satisfy 1 <= n <= min(N, K-1)");
  if (svd.sigma.size() < n) throw ConfigError("dmd fit: precomputed SVD has too few modes");

  DMDModel m;
  m.t0 = S.t0;
  m.dt = S.dt;
  m.requested_rank = n;
  m.thresholds = opts;

  // drop numerically null directions before inverting Sigma
  int r = 0;
  const double s1 = svd.sigma(0);
  while (r < n && s1 > 0.0 && svd.sigma(r) >= opts.sigma_drop * s1) ++r;
  m.rank_deficient = r < n;
  if (r == 0) {
    // all-zero data: the model predicts zero
    m.basis = Eigen::MatrixXd::Zero(S.data.rows(), 0);
    return m;
  }
  m.basis = svd.U.leftCols(r);
  m.sigma = svd.sigma.head(r);
  const Eigen::MatrixXd V = svd.V.leftCols(r);

  const Eigen::MatrixXd An = m.basis.transpose() * S.data.rightCols(K - 1) * V *
                             m.sigma.cwiseInverse().asDiagonal();
  const Eigen::EigenSolver<Eigen::MatrixXd> es(An, true);
  if (es.info() != Eigen::Success) throw NumericalError("dmd fit: eigensolver failed");
  const Eigen::VectorXcd lam = es.eigenvalues();
  const Eigen::MatrixXcd vec = es.eigenvectors();

  // deterministic ordering: |lambda| descending, ties by phase
  std::vector<int> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = std::abs(lam(a)), mb = std::abs(lam(b));
    if (std::abs(ma - mb) > 1e-12 * std::max(ma, mb)) return ma > mb;
    return std::arg(lam(a)) < std::arg(lam(b));
  });
  m.lambda.resize(r);
  m.W.resize(r, r);
  for (int k = 0; k < r; ++k) {
    m.lambda(k) = lam(order[k]);
    m.W.col(k) = vec.col(order[k]);
  }

  m.omega.resize(r);
  m.dropped.assign(r, 0);
  for (int k = 0; k < r; ++k) {
    if (std::abs(m.lambda(k)) < opts.lambda_drop) {
      m.dropped[k] = 1;
      m.omega(k) = 0.0;
    } else {
      m.omega(k) = std::log(m.lambda(k)) / m.dt;
    }
  }

  // amplitudes: W b = U_n^T F(t_1)
  const Eigen::VectorXcd rhs = (m.basis.transpose() * S.data.col(0)).cast<std::complex<double>>();
  const Eigen::JacobiSVD<Eigen::MatrixXcd> wsvd(m.W, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& ws = wsvd.singularValues();
  const double cond = ws(ws.size() - 1) > 0.0 ? ws(0) / ws(ws.size() - 1) : INFINITY;
  if (cond > opts.cond_limit) {
    m.ill_conditioned = true;
    Eigen::JacobiSVD<Eigen::MatrixXcd> reg(m.W, Eigen::ComputeThinU | Eigen::ComputeThinV);
    reg.setThreshold(1.0 / opts.cond_limit);
    m.b = reg.solve(rhs);
  } else {
    m.b = m.W.partialPivLu().solve(rhs);
  }
  for (int k = 0; k < r; ++k)
    if (m.dropped[k]) m.b(k) = 0.0;
  return m;
}

DMDModel fit(const SnapshotMatrix& S, int n, const DMDOptions& opts) {
  S.validate();
  const Eigen::Index K = S.data.cols();
  if (K < 3) throw ConfigError("dmd fit: need at least three snapshots");
  if (n < 1 || n > std::min<Eigen::Index>(S.data.rows(), K - 1))
    throw ConfigError("dmd fit: rank must satisfy 1 <= n <= min(N, K-1)");
  const SVDTriple svd = truncated_svd(S.data.leftCols(K - 1), n);
  return fit_with_svd(S, svd, n, opts);
}

Eigen::VectorXcd modal_coefficients(const DMDModel& m, double t) {
  const int r = m.rank();
  Eigen::VectorXcd c(r);
  for (int k = 0; k < r; ++k)
    c(k) = m.dropped[k] ? std::complex<double>(0.0) : std::exp(m.omega(k) * (t - m.t0)) * m.b(k);
  return m.W * c;
}

void predict_into(const DMDModel& m, double t, std::span<double> out) {
  if (out.size() != m.state_dim()) throw ConfigError("predict: output size mismatch");
  Eigen::Map<Eigen::VectorXd> y(out.data(), static_cast<Eigen::Index>(out.size()));
  if (m.rank() == 0) {
    y.setZero();
    return;
  }
  const Eigen::VectorXd re = modal_coefficients(m, t).real();
  y.noalias() = m.basis * re;
}

Eigen::VectorXd predict(const DMDModel& m, double t) {
  Eigen::VectorXd y(m.state_dim());
  predict_into(m, t, {y.data(), static_cast<std::size_t>(y.size())});
  return y;
}

Eigen::VectorXcd predict_complex(const DMDModel& m, double t) {
  if (m.rank() == 0) return Eigen::VectorXcd::Zero(m.state_dim());
  return m.basis.cast<std::complex<double>>() * modal_coefficients(m, t);
}

double amplitude_residual(const DMDModel& m, const Eigen::VectorXd& first) {
  if (m.rank() == 0) return 0.0;
  const Eigen::VectorXcd rhs = (m.basis.transpose() * first).cast<std::complex<double>>();
  const double denom = rhs.norm();
  return denom > 0.0 ? (m.W * m.b - rhs).norm() / denom : (m.W * m.b).norm();
}

}  // namespace tsdmd
