// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "tsdmd/dmd.hpp"
#include "tsdmd/errors.hpp"

using namespace tsdmd;

namespace {

// columns P A^k z0, k = 0..K-1
SnapshotMatrix linear_data(const Eigen::MatrixXd& P, const Eigen::MatrixXd& A, const Eigen::VectorXd& z0,
                           int K, double t0 = 0.0, double dt = 0.1) {
  SnapshotMatrix S;
  S.t0 = t0;
  S.dt = dt;
  S.data.resize(P.rows(), K);
  Eigen::VectorXd z = z0;
  for (int k = 0; k < K; ++k) {
    S.data.col(k) = P * z;
    z = A * z;
  }
  return S;
}

Eigen::MatrixXd random_matrix(int r, int c, unsigned seed) {
  std::srand(seed);
  return Eigen::MatrixXd::Random(r, c);
}

std::vector<std::complex<double>> sorted_eigs(const DMDModel& m) {
  std::vector<std::complex<double>> v(m.lambda.data(), m.lambda.data() + m.lambda.size());
  std::sort(v.begin(), v.end(), [](auto a, auto b) { return a.imag() < b.imag(); });
  return v;
}

}  // namespace

TEST_SUITE("dmd") {

TEST_CASE("truncated_svd matches a dense SVD") {
  for (auto [rows, cols] : {std::pair{40, 7}, std::pair{5, 9}}) {
    CAPTURE(rows);
    const Eigen::MatrixXd X = random_matrix(rows, cols, 3);
    const Eigen::JacobiSVD<Eigen::MatrixXd> ref(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const int n = 4;
    const SVDTriple s = truncated_svd(X, n);
    CHECK_FALSE(s.rank_deficient);
    for (int k = 0; k < n; ++k) {
      CHECK(s.sigma(k) == doctest::Approx(ref.singularValues()(k)).epsilon(1e-10));
      CHECK(std::abs(s.U.col(k).dot(ref.matrixU().col(k))) == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK((s.U.transpose() * s.U - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-10);
    const Eigen::MatrixXd Xn = s.U * s.sigma.asDiagonal() * s.V.transpose();
    const Eigen::MatrixXd Xr = ref.matrixU().leftCols(n) * ref.singularValues().head(n).asDiagonal() *
                               ref.matrixV().leftCols(n).transpose();
    CHECK((Xn - Xr).norm() < 1e-10 * X.norm());
  }
  CHECK(truncated_svd(random_matrix(10, 2, 1) * random_matrix(2, 6, 2), 3).rank_deficient);
  CHECK_THROWS_AS(truncated_svd(random_matrix(10, 4, 1), 0), ConfigError);
  CHECK_THROWS_AS(truncated_svd(random_matrix(10, 4, 1), 5), ConfigError);
}

TEST_CASE("constant data has a single unit eigenvalue") {
  SnapshotMatrix S;
  S.data = Eigen::VectorXd::LinSpaced(5, 1.0, 2.0).replicate(1, 6);
  S.dt = 0.2;
  const DMDModel m = fit(S, 1);
  REQUIRE(m.rank() == 1);
  CHECK(std::abs(m.lambda(0) - 1.0) < 1e-12);
  CHECK(std::abs(m.omega(0)) < 1e-10);
  CHECK((predict(m, 7.3) - S.data.col(0)).norm() < 1e-12);
}

TEST_CASE("decaying pair diag(0.9, 0.5)") {
  const Eigen::MatrixXd P = random_matrix(6, 2, 9);
  const Eigen::Vector2d z0(1.0, 2.0);
  const Eigen::Matrix2d A = Eigen::Vector2d(0.9, 0.5).asDiagonal();
  const SnapshotMatrix S = linear_data(P, A, z0, 20);
  const DMDModel m = fit(S, 2);
  CHECK(std::abs(m.lambda(0) - 0.9) < 1e-10);
  CHECK(std::abs(m.lambda(1) - 0.5) < 1e-10);
  CHECK(std::abs(m.omega(0) - std::log(0.9) / 0.1) < 1e-8);
  CHECK(amplitude_residual(m, S.data.col(0)) < 1e-12);

  // five steps past the last snapshot
  const double t = S.t0 + (19 + 5) * S.dt;
  Eigen::Vector2d z = z0;
  for (int k = 0; k < 24; ++k) z = A * z;
  CHECK((predict(m, t) - P * z).norm() < 1e-10 * (P * z0).norm());
  // between grid times: A^2.5
  const Eigen::Vector2d zh(std::pow(0.9, 2.5) * z0(0), std::pow(0.5, 2.5) * z0(1));
  CHECK((predict(m, 0.25) - P * zh).norm() < 1e-10);
}

TEST_CASE("rotation by 0.3 rad per step") {
  const double th = 0.3;
  Eigen::Matrix2d A;
  A << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const Eigen::MatrixXd P = random_matrix(8, 2, 4);
  const SnapshotMatrix S = linear_data(P, A, Eigen::Vector2d(1.0, 0.0), 15, 1.0, 0.05);
  const DMDModel m = fit(S, 2);
  const auto e = sorted_eigs(m);
  CHECK(std::abs(e[0] - std::polar(1.0, -th)) < 1e-10);
  CHECK(std::abs(e[1] - std::polar(1.0, th)) < 1e-10);
  CHECK(std::abs(std::abs(m.omega(0).imag()) - th / 0.05) < 1e-8);
  for (double t : {1.0, 1.37, 2.5})
    CHECK(predict_complex(m, t).imag().norm() < 1e-10 * predict_complex(m, t).real().norm());
  for (int k = 0; k < 15; ++k) CHECK((predict(m, 1.0 + k * 0.05) - S.data.col(k)).norm() < 1e-10);
}

TEST_CASE("negative real eigenvalue keeps grid-time predictions exact") {
  const Eigen::MatrixXd P = random_matrix(4, 1, 2);
  Eigen::MatrixXd A(1, 1);
  A << -0.5;
  const SnapshotMatrix S = linear_data(P, A, Eigen::VectorXd::Ones(1), 8);
  const DMDModel m = fit(S, 1);
  CHECK(std::abs(m.lambda(0) + 0.5) < 1e-12);
  CHECK(std::abs(m.omega(0).imag() - std::numbers::pi / 0.1) < 1e-8);
  for (int k = 0; k < 8; ++k) CHECK((predict(m, k * 0.1) - S.data.col(k)).norm() < 1e-12);
}

TEST_CASE("projection consistency and fit_with_svd") {
  const Eigen::MatrixXd X = random_matrix(30, 12, 17);
  SnapshotMatrix S;
  S.data = X;
  S.dt = 0.5;
  const DMDModel m = fit(S, 5);
  CHECK((m.basis.transpose() * predict(m, 1.7) - modal_coefficients(m, 1.7).real()).norm() < 1e-10);
  // predictions live in span(U_n)
  const Eigen::VectorXd y = predict(m, 3.3);
  CHECK((y - m.basis * (m.basis.transpose() * y)).norm() < 1e-10 * y.norm());
  const SVDTriple svd = truncated_svd(S.data.leftCols(11), 8);
  const DMDModel m2 = fit_with_svd(S, svd, 5);
  CHECK((predict(m2, 1.7) - predict(m, 1.7)).norm() < 1e-9 * predict(m, 1.7).norm());
  // the sum of eigenvalues is the trace of A_n, independent of the order
  CHECK(std::abs(m.lambda.sum() - m2.lambda.sum()) < 1e-9);
  for (int k = 1; k < m.rank(); ++k) CHECK(std::abs(m.lambda(k - 1)) >= std::abs(m.lambda(k)) - 1e-12);
}

TEST_CASE("rank deficiency and zero data") {
  const Eigen::MatrixXd P = random_matrix(6, 1, 5);
  Eigen::MatrixXd A(1, 1);
  A << 0.8;
  const SnapshotMatrix S = linear_data(P, A, Eigen::VectorXd::Ones(1), 10);
  const DMDModel m = fit(S, 3);
  CHECK(m.rank_deficient);
  CHECK(m.rank() == 1);
  CHECK(m.requested_rank == 3);
  CHECK((predict(m, 1.2) - P * std::pow(0.8, 12)).norm() < 1e-10);

  SnapshotMatrix Z;
  Z.data = Eigen::MatrixXd::Zero(4, 5);
  const DMDModel mz = fit(Z, 2);
  CHECK(mz.rank() == 0);
  CHECK(predict(mz, 3.0).norm() == 0.0);
}

TEST_CASE("fit errors") {
  SnapshotMatrix S;
  S.data = random_matrix(5, 4, 1);
  CHECK_THROWS_AS(fit(S, 0), ConfigError);
  CHECK_THROWS_AS(fit(S, 4), ConfigError);
  S.dt = 0.0;
  CHECK_THROWS_AS(fit(S, 1), ConfigError);
  S.dt = 1.0;
  S.data(2, 2) = NAN;
  CHECK_THROWS_AS(fit(S, 1), ConfigError);
  S.data = random_matrix(5, 2, 1);
  CHECK_THROWS_AS(fit(S, 1), ConfigError);
  S.data = random_matrix(5, 4, 1);
  const DMDModel m = fit(S, 2);
  Eigen::VectorXd out(3);
  CHECK_THROWS_AS(predict_into(m, 0.0, {out.data(), 3}), ConfigError);
}

}  // TEST_SUITE
