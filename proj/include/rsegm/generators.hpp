// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rsegm/problem.hpp"

namespace rsegm {

// Bilinear instance whose matrix is the product of sparse Gaussian factors
// U (m x rank) and V (rank x n). Factor density is chosen so that the product
// has the requested expected density. b = A xh and c = -A^T yh for Gaussian
// (xh, yh), stored as the reference solution, so Z* is nonempty.
SaddleProblem generate_bilinear(std::size_t m, std::size_t n, std::size_t rank,
                                double density, std::uint64_t seed);

// Standard-form LP with a unique, strictly complementary optimum. A is dense
// Gaussian, a random well-conditioned basis carries x_B ~ U[1,2], and the
// nonbasic reduced costs are U[0.1,1].
SaddleProblem generate_lp_known_solution(std::size_t m, std::size_t n,
                                         std::uint64_t seed);

inline constexpr int kBasisRetries = 10;
inline constexpr double kBasisMinRcond = 1e-8;

// Builds b = A_B x_B and c = A^T y + s (s zero on the basis) from a chosen
// basis. y is the multiplier of the usual dual max b^T y s.t. A^T y <= c;
// the stored saddle-form optimum is (x*, -y) because the Lagrangian here is
// y^T A x + c^T x - b^T y. slack has one entry per nonbasic column, in
// increasing column order.
SaddleProblem build_lp_with_optimum(std::shared_ptr<const SparseMatrixDual> a,
                                    std::span<const std::size_t> basis,
                                    std::span<const double> x_basis,
                                    std::span<const double> y_dual,
                                    std::span<const double> slack);

// min 1^T x s.t. (0 1) x <= 1, x >= 0, with dual y >= 0.
SaddleProblem counterexample_lp();

}  // namespace rsegm
