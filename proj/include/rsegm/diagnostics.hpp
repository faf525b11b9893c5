// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rsegm/problem.hpp"

namespace rsegm {

inline constexpr double kGapTolerance = 1e-12;
inline constexpr int kGapMaxBisections = 200;

struct GapResult {
  double value = 0.0;   // rho_r(z)
  double lambda = 0.0;  // ball multiplier at the maximizer (0 if unused)
  double step_norm = 0.0;  // |d| at the maximizer
  int iterations = 0;
  bool limiting = false;  // maximizer lies strictly inside the ball
  std::vector<double> direction;  // maximizing d = zhat - z
};

// rho_r(z) = max over zhat in W_r(z) of (L(x, yhat) - L(xhat, y)) / r, where
// W_r(z) is the r-ball around z intersected with the domain (x >= 0 for LPs,
// and y >= 0 under the dual-nonnegativity flag). Bilinear: |g| exactly.
// LP: bisection on the ball multiplier. Throws ArgumentError when r <= 0 or
// z lies outside the domain, ToleranceError if bisection fails.
GapResult normalized_duality_gap_detail(const SaddleProblem& problem,
                                        const Iterate& z, double r,
                                        double tolerance = kGapTolerance);
double normalized_duality_gap(const SaddleProblem& problem, const Iterate& z,
                              double r, double tolerance = kGapTolerance);

// dist(0, dL(z)) with the coordinate-wise normal-cone selection. Infinite
// when z is outside the domain.
double subdifferential_distance(const SaddleProblem& problem, const Iterate& z);

struct RateFit {
  double rate = 1.0;      // exp(slope) per unit of the abscissa
  double goodness = 1.0;  // coefficient of determination
};

// Least-squares line through (x, log d) for d > 0. Throws
// InsufficientDataError with fewer than three usable points.
RateFit fit_linear_rate(const std::vector<std::pair<double, double>>& points);

}  // namespace rsegm
