// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsegm/problem.hpp"
#include "rsegm/solver.hpp"

namespace rsegm {

// Sample quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

struct CheckpointSummary {
  std::int64_t iteration = 0;
  int epoch = 0;
  bool epoch_end = false;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
  int n_ok = 0;
  int n_failed = 0;
};

struct TrialEnsemble {
  SolverConfig config;  // seed field holds the base seed
  std::uint64_t base_seed = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::optional<RunTrace>> traces;  // empty for failed trials
  std::vector<std::string> failures;            // empty for successful trials
  // "distance" when every run measures distance to optimum, else "gap".
  std::string metric;
  std::vector<CheckpointSummary> summary;

  int n_failed() const;
};

// n_trials independent runs of solve(problem, config with seed
// mix_seed(base_seed, i), z0). Divergent trials are marked failed; other
// errors propagate. threads <= 0 picks the hardware concurrency.
TrialEnsemble run_trials(const SaddleProblem& problem, const SolverConfig& config,
                         const Iterate& z0, int n_trials, std::uint64_t base_seed,
                         int threads = 1);

// Per-record quantiles; records align because the schedule is seed-free.
std::vector<CheckpointSummary> summarize(const TrialEnsemble& ensemble,
                                         const std::string& metric);

}  // namespace rsegm
