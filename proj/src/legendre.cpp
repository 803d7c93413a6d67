// SPDX-License-Identifier: Apache-2.0
#include "tsdmd/legendre.hpp"

#include <array>
#include <vector>

namespace tsdmd {

void shifted_legendre(int M, double xi, std::span<double> value, std::span<double> d1,
                      std::span<double> d2) {
  if (M <= 0) return;
  const double s = 2.0 * xi - 1.0;
  // P, P', P'' in s; recurrences
  //   (n+1) P_{n+1} = (2n+1) s P_n - n P_{n-1}
  //   P'_{n+1} = P'_{n-1} + (2n+1) P_n
  //   P''_{n+1} = P''_{n-1} + (2n+1) P'_n
  std::vector<double> p(M), dp(M), ddp(M);
  p[0] = 1.0;
  dp[0] = 0.0;
  ddp[0] = 0.0;
  if (M > 1) {
    p[1] = s;
    dp[1] = 1.0;
    ddp[1] = 0.0;
  }
  for (int n = 1; n + 1 < M; ++n) {
    p[n + 1] = ((2 * n + 1) * s * p[n] - n * p[n - 1]) / (n + 1);
    dp[n + 1] = dp[n - 1] + (2 * n + 1) * p[n];
    ddp[n + 1] = ddp[n - 1] + (2 * n + 1) * dp[n];
  }
  for (int j = 0; j < M; ++j) {
    if (!value.empty()) value[j] = p[j];
    if (!d1.empty()) d1[j] = 2.0 * dp[j];
    if (!d2.empty()) d2[j] = 4.0 * ddp[j];
  }
}

void bump_basis(int M, double xi, std::span<double> value, std::span<double> d1,
                std::span<double> d2) {
  std::vector<double> l(M), dl(M), ddl(M);
  shifted_legendre(M, xi, l, dl, ddl);
  const double u = xi * (1.0 - xi);
  const double du = 1.0 - 2.0 * xi;
  for (int j = 0; j < M; ++j) {
    if (!value.empty()) value[j] = l[j] * u;
    if (!d1.empty()) d1[j] = dl[j] * u + l[j] * du;
    if (!d2.empty()) d2[j] = ddl[j] * u + 2.0 * dl[j] * du - 2.0 * l[j];
  }
}

}  // namespace tsdmd
