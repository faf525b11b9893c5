// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsegm/diagnostics.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "rsegm/errors.hpp"

namespace rsegm {

namespace {

// Lower bounds on d: -z_k for clamped coordinates, -inf for free ones.
std::vector<double> step_floor(const SaddleProblem& problem, const Iterate& z) {
  constexpr double kFree = -std::numeric_limits<double>::infinity();
  std::vector<double> floor(problem.dim(), kFree);
  if (problem.is_bilinear()) return floor;
  for (std::size_t j = 0; j < problem.n(); ++j) floor[j] = -z[j];
  if (problem.dual_nonnegative()) {
    for (std::size_t i = problem.n(); i < problem.dim(); ++i) floor[i] = -z[i];
  }
  return floor;
}

void fill_step(std::span<const double> g, std::span<const double> floor,
               double lambda, std::vector<double>& d) {
  const double inv = 0.5 / lambda;
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = std::max(g[k] * inv, floor[k]);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

GapResult normalized_duality_gap_detail(const SaddleProblem& problem,
                                        const Iterate& z, double r,
                                        double tolerance) {
  if (!(r > 0.0)) throw ArgumentError("gap radius must be positive");
  const std::vector<double> g = gap_linear_coefficients(problem, z);
  const std::vector<double> floor = step_floor(problem, z);
  for (double f : floor) {
    if (f > 0.0) throw ArgumentError("gap point lies outside the domain");
  }

  GapResult out;
  const double gnorm = norm2(g);
  if (gnorm == 0.0) {
    out.direction.assign(g.size(), 0.0);
    return out;
  }
  if (problem.is_bilinear()) {
    out.value = gnorm;
    out.lambda = gnorm / (2.0 * r);
    out.step_norm = r;
    out.direction.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) out.direction[k] = g[k] * r / gnorm;
    return out;
  }

  // Limiting point as lambda -> 0: exists only if no coordinate grows.
  bool bounded = true;
  std::vector<double> d(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g[k] > 0.0 || (g[k] < 0.0 && std::isinf(floor[k]))) {
      bounded = false;
      break;
    }
    d[k] = g[k] < 0.0 ? floor[k] : 0.0;
  }
  if (bounded && norm2(d) <= r) {
    out.value = dot(g, d) / r;
    out.step_norm = norm2(d);
    out.limiting = true;
    out.direction = std::move(d);
    return out;
  }

  // |d(lambda)| is nonincreasing; at lambda = |g|/(2r) it is at most r.
  double hi = gnorm / (2.0 * r);
  double lo = hi;
  fill_step(g, floor, lo, d);
  int halvings = 0;
  while (norm2(d) < r) {
    if (++halvings > 4000 || lo == 0.0) {
      throw ToleranceError("gap bisection could not bracket the ball radius");
    }
    hi = lo;
    lo *= 0.5;
    fill_step(g, floor, lo, d);
  }

  double lambda = lo;
  int it = 0;
  for (;; ++it) {
    lambda = std::sqrt(lo * hi);
    fill_step(g, floor, lambda, d);
    const double norm = norm2(d);
    if (std::abs(norm - r) <= tolerance * r || hi / lo - 1.0 <= 4e-16) break;
    if (it >= kGapMaxBisections) {
      throw ToleranceError(fmt::format(
          "gap bisection stalled after {} iterations (|d| = {}, r = {})", it,
          norm, r));
    }
    (norm > r ? lo : hi) = lambda;
  }
  out.lambda = lambda;
  out.step_norm = norm2(d);
  out.iterations = it;
  out.value = dot(g, d) / r;
  out.direction = std::move(d);
  return out;
}

double normalized_duality_gap(const SaddleProblem& problem, const Iterate& z,
                              double r, double tolerance) {
  return normalized_duality_gap_detail(problem, z, r, tolerance).value;
}

double subdifferential_distance(const SaddleProblem& problem, const Iterate& z) {
  if (z.size() != problem.dim()) {
    throw StructuralError("iterate does not match the problem dimension");
  }
  // Residuals (A^T y + c, -A x + b); the linear terms enter through F for
  // bilinear problems and through the gradient of g for LPs alike.
  std::vector<double> res(problem.dim());
  full_operator_into(problem, z.values(), res);
  if (!problem.is_bilinear()) {
    for (std::size_t j = 0; j < problem.n(); ++j) res[j] += problem.c()[j];
    for (std::size_t i = 0; i < problem.m(); ++i) res[problem.n() + i] += problem.b()[i];
  }

  double sq = 0.0;
  for (std::size_t k = 0; k < res.size(); ++k) {
    const bool is_x = k < problem.n();
    const bool clamped =
        !problem.is_bilinear() && (is_x || problem.dual_nonnegative());
    double part = std::abs(res[k]);
    if (clamped) {
      if (z[k] < 0.0) return std::numeric_limits<double>::infinity();
      // At the boundary the normal cone (-inf, 0] absorbs positive residuals.
      if (z[k] == 0.0) part = std::max(-res[k], 0.0);
    }
    sq += part * part;
  }
  return std::sqrt(sq);
}

RateFit fit_linear_rate(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [x, d] : points) {
    if (d > 0.0 && std::isfinite(d)) {
      xs.push_back(x);
      ys.push_back(std::log(d));
    }
  }
  if (xs.size() < 3) {
    throw InsufficientDataError(fmt::format(
        "rate fit needs at least 3 positive distances, got {}", xs.size()));
  }
  const double count = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (sxx == 0.0) throw InsufficientDataError("rate fit needs distinct abscissae");
  const double slope = sxy / sxx;
  RateFit fit;
  fit.rate = std::exp(slope);
  fit.goodness = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace rsegm
