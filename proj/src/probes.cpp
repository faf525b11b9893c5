// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsegm/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsegm/errors.hpp"
#include "rsegm/solver.hpp"

namespace rsegm {

namespace {

double sq_distance(std::span<const double> a, std::span<const double> b) {
  const double d = distance(a, b);
  return d * d;
}

void require_probe_setting(const SaddleProblem& problem, double p) {
  if (!problem.is_bilinear()) {
    throw UnsupportedError("probes are defined for unconstrained bilinear problems");
  }
  if (!(p > 0.0 && p < 1.0)) throw ArgumentError("probes need p in (0, 1)");
}

}  // namespace

DescentCheck descent_check(const SaddleProblem& problem,
                           const StochasticOracle& oracle, double p, double tau,
                           const Iterate& z, const Iterate& w,
                           const Iterate& z_star) {
  SegmState state(problem, oracle, p, tau, z, w);
  state.prepare();

  const std::span<const double> zh = state.half();
  std::vector<double> next(problem.dim());
  double e_next_sq = 0.0;  // E|z_{k+1} - z*|^2
  double e_gap_sq = 0.0;   // E|z_{k+1/2} - z_{k+1}|^2
  oracle.for_each_outcome([&](const OracleDraw& d, double prob) {
    state.candidate(d, next);
    e_next_sq += prob * sq_distance(next, z_star.values());
    e_gap_sq += prob * sq_distance(zh, next);
  });

  const double w_sq = sq_distance(w.values(), z_star.values());
  DescentCheck out;
  // w_{k+1} = z_{k+1} with probability p, else w_k.
  out.expected_next = (1.0 - p) * e_next_sq + p * e_next_sq + (1.0 - p) * w_sq;
  out.current = (1.0 - p) * sq_distance(z.values(), z_star.values()) + w_sq;
  out.bound = out.current - 0.5 * (p * sq_distance(zh, w.values()) + e_gap_sq);
  return out;
}

BoundednessProbe boundedness_probe(const SaddleProblem& problem,
                                   const StochasticOracle& oracle, double p,
                                   double tau, const Iterate& z0,
                                   std::int64_t steps, int trials,
                                   std::uint64_t seed) {
  require_probe_setting(problem, p);
  if (trials < 2 || steps < 1) throw ArgumentError("probe needs >= 2 trials and >= 1 step");
  const Iterate z_star = project_to_optimal_set(problem, z0);
  BoundednessProbe out;
  out.bound = (3.0 + std::sqrt(2.0 / (1.0 - p))) * distance(z0.values(), z_star.values());

  const auto count = static_cast<std::size_t>(steps);
  std::vector<double> sum(count, 0.0), sum_sq(count, 0.0);
  for (int trial = 0; trial < trials; ++trial) {
    RandomStream rng(mix_seed(seed, static_cast<std::uint64_t>(trial)));
    SegmState state(problem, oracle, p, tau, z0);
    for (std::size_t k = 0; k < count; ++k) {
      state.step(rng);
      const double d = distance(state.half(), z0.values());
      sum[k] += d;
      sum_sq[k] += d * d;
    }
  }
  const double n = static_cast<double>(trials);
  out.worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < count; ++k) {
    const double mean = sum[k] / n;
    const double var = std::max(0.0, (sum_sq[k] - n * mean * mean) / (n - 1.0));
    const double se = std::sqrt(var / n);
    out.mean.push_back(mean);
    out.standard_error.push_back(se);
    out.worst_excess = std::max(out.worst_excess, mean - 3.0 * se - out.bound);
  }
  return out;
}

GapBoundProbe gap_bound_probe(const SaddleProblem& problem,
                              const StochasticOracle& oracle, double p,
                              double tau, const Iterate& z0, std::int64_t steps,
                              int trials, std::uint64_t seed) {
  require_probe_setting(problem, p);
  if (trials < 2 || steps < 1) throw ArgumentError("probe needs >= 2 trials and >= 1 step");
  const std::size_t dim = problem.dim();
  if (dim > 12) throw UnsupportedSizeError("grid probe limited to dimension 12");

  // C = z0 + {-1, 0, 1}^dim
  std::size_t grid_size = 1;
  for (std::size_t k = 0; k < dim; ++k) grid_size *= 3;
  std::vector<std::vector<double>> grid(grid_size, std::vector<double>(dim));
  for (std::size_t g = 0; g < grid_size; ++g) {
    std::size_t code = g;
    for (std::size_t k = 0; k < dim; ++k) {
      grid[g][k] = z0[k] + static_cast<double>(code % 3) - 1.0;
      code /= 3;
    }
  }

  const Iterate z_star = project_to_optimal_set(problem, z0);
  GapBoundProbe out;
  out.bound = 3.5 * static_cast<double>(dim) +
              14.0 * sq_distance(z0.values(), z_star.values());

  // With g = 0, sum_l Theta_l(z) = sum_l <F_l, z_l> - <sum_l F_l, z>, where
  // F_l = F(z_{l+1/2}).
  std::vector<double> f(dim), f_sum(dim);
  double total = 0.0, total_sq = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    RandomStream rng(mix_seed(seed, static_cast<std::uint64_t>(trial)));
    SegmState state(problem, oracle, p, tau, z0);
    std::fill(f_sum.begin(), f_sum.end(), 0.0);
    double inner = 0.0;
    for (std::int64_t k = 0; k < steps; ++k) {
      state.step(rng);
      full_operator_into(problem, state.half(), f);
      for (std::size_t c = 0; c < dim; ++c) {
        inner += f[c] * state.half()[c];
        f_sum[c] += f[c];
      }
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& point : grid) {
      double dot = 0.0;
      for (std::size_t c = 0; c < dim; ++c) dot += f_sum[c] * point[c];
      best = std::max(best, inner - dot);
    }
    const double value = 2.0 * tau * best;
    total += value;
    total_sq += value * value;
  }
  const double n = static_cast<double>(trials);
  out.mean = total / n;
  const double var = std::max(0.0, (total_sq - n * out.mean * out.mean) / (n - 1.0));
  out.standard_error = std::sqrt(var / n);
  return out;
}

}  // namespace rsegm
