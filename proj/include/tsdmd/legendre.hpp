// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

namespace tsdmd {

/// Shifted Legendre polynomials on [0,1]: l_j(xi) = P_{j-1}(2 xi - 1) for
/// j = 1..M, with first and second xi-derivatives. Any output span may be empty.
void shifted_legendre(int M, double xi, std::span<double> value, std::span<double> d1,
                      std::span<double> d2);

/// Bump-weighted basis l_j(xi) * xi (1 - xi) and its xi-derivatives.
void bump_basis(int M, double xi, std::span<double> value, std::span<double> d1,
                std::span<double> d2);

}  // namespace tsdmd
