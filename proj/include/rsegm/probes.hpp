// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "rsegm/oracle.hpp"
#include "rsegm/problem.hpp"

namespace rsegm {

// One-step descent of phi_k(z) = (1-p)|z_k - z|^2 + |w_k - z|^2, with the
// expectation over xi and the snapshot coin taken exactly by enumeration.
struct DescentCheck {
  double expected_next = 0.0;  // E_k[phi_{k+1}(z*)]
  double current = 0.0;        // phi_k(z*)
  // phi_k(z*) - (p|z_{k+1/2} - w_k|^2 + E_k|z_{k+1/2} - z_{k+1}|^2) / 2
  double bound = 0.0;
};

DescentCheck descent_check(const SaddleProblem& problem,
                           const StochasticOracle& oracle, double p, double tau,
                           const Iterate& z, const Iterate& w,
                           const Iterate& z_star);

// Monte-Carlo mean and standard error per step of |z_{k+1/2} - z_0| over
// independent sEGM runs, against (3 + sqrt(2/(1-p))) |z_0 - z*| with z* the
// projection of z_0 onto Z*. Bilinear problems, p < 1.
struct BoundednessProbe {
  std::vector<double> mean;
  std::vector<double> standard_error;
  double bound = 0.0;
  // max over k of mean - 3 * standard_error - bound; <= 0 passes.
  double worst_excess = 0.0;
};

BoundednessProbe boundedness_probe(const SaddleProblem& problem,
                                   const StochasticOracle& oracle, double p,
                                   double tau, const Iterate& z0,
                                   std::int64_t steps, int trials,
                                   std::uint64_t seed);

// Monte-Carlo estimate of 2 tau E[max_{z in C} sum_l Theta_{l+1/2}(z)] over
// the grid C = z0 + {-1, 0, 1}^dim, against
// (7/2) max_C |z0 - z|^2 + 14 |z0 - z*|^2. Bilinear problems, p < 1.
struct GapBoundProbe {
  double mean = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
};

GapBoundProbe gap_bound_probe(const SaddleProblem& problem,
                              const StochasticOracle& oracle, double p,
                              double tau, const Iterate& z0, std::int64_t steps,
                              int trials, std::uint64_t seed);

}  // namespace rsegm
