// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rsegm/oracle.hpp"
#include "rsegm/problem.hpp"
#include "rsegm/random.hpp"

namespace rsegm {

enum class Algorithm { kRsegm, kSegmNoRestart, kDetRestart, kDetEgm };

std::string_view to_string(Algorithm algo);
Algorithm parse_algorithm(std::string_view tag);

// What the user asked for; unset fields take defaults in resolve_config.
struct SolverOptions {
  Algorithm algorithm = Algorithm::kRsegm;
  OracleKind oracle = OracleKind::kImportanceRc;
  std::optional<double> p;
  std::optional<double> tau;
  std::optional<std::int64_t> inner_iters;
  std::optional<int> restarts;
  std::optional<double> eps;
  double k_multiplier = 1.0;
  std::uint64_t seed = 0;
  std::int64_t record_every = 0;
  bool lazy = false;
  double gap_radius = 1.0;
  bool keep_iterates = false;
};

// Fully resolved run parameters.
struct SolverConfig {
  Algorithm algorithm = Algorithm::kRsegm;
  OracleKind oracle = OracleKind::kImportanceRc;
  double p = 1.0;
  double tau = 0.0;
  std::int64_t inner_iters = 1;  // K
  int restarts = 1;              // T
  std::uint64_t seed = 0;
  std::int64_t record_every = 0;  // 0: epoch boundaries only
  bool lazy = false;
  double lipschitz = 0.0;
  double gap_radius = 1.0;
  bool keep_iterates = false;
  std::optional<double> eps;
  std::optional<double> initial_distance;  // R0 when measurable
  double k_multiplier = 1.0;
};

// Scale of the deterministic restart length K = factor * |A|_2 / alpha.
inline constexpr double kDetRestartFactor = 8.0;

double default_p(OracleKind kind, const SparseMatrixDual& a);

// Expands defaults:
//   p   = (m+n)/nnz (row-column), 1/nnz (coordinate), 1 (full), clamped to (0,1]
//   tau = sqrt(p) / (2 L)
//   T   = ceil(log2(R0 / eps)), needs eps and a measurable R0
//   K   = ceil(mult * (L / alpha) * T^2 / sqrt(p)), alpha = sigma_min_plus(A)
// Deterministic algorithms force the full oracle and p = 1; det-restart uses
// K = ceil(kDetRestartFactor * |A|_2 / alpha); mult only scales the
// stochastic schedule. Throws ArgumentError for
// invalid or unresolvable settings.
SolverConfig resolve_config(const SaddleProblem& problem,
                            const SolverOptions& options, const Iterate& z0);

// One sEGM trajectory on the dense path. Fw caches F(w) (linear terms
// included) and half_sum accumulates the half-iterates.
class SegmState {
 public:
  SegmState(const SaddleProblem& problem, const StochasticOracle& oracle,
            double p, double tau, const Iterate& z0);
  // Arbitrary state (z_k, w_k); the half-iterate sum starts empty.
  SegmState(const SaddleProblem& problem, const StochasticOracle& oracle,
            double p, double tau, const Iterate& z, const Iterate& w);

  // Forms v = zbar - tau F(w) and z_{k+1/2} = prox(v) for the current state.
  void prepare();
  // z_{k+1} for draw d from the prepared state; the state is not modified.
  void candidate(const OracleDraw& d, std::span<double> out) const;

  struct StepInfo {
    OracleDraw draw;
    bool refreshed = false;
  };
  // prepare, draw xi, move to z_{k+1}, then toss the snapshot coin.
  StepInfo step(RandomStream& rng);

  const Iterate& z() const { return z_; }
  const Iterate& w() const { return w_; }
  std::span<const double> half() const { return zh_; }
  std::span<const double> fw() const { return fw_; }
  std::span<const double> half_sum() const { return half_sum_; }
  std::int64_t steps() const { return steps_; }
  Iterate average() const;

 private:
  const SaddleProblem& problem_;
  const StochasticOracle& oracle_;
  double p_;
  double tau_;
  Iterate z_;
  Iterate w_;
  std::vector<double> fw_;
  std::vector<double> v_;
  std::vector<double> zh_;
  std::vector<double> next_;
  std::vector<double> half_sum_;
  std::int64_t steps_ = 0;
};

struct TraceRecord {
  std::int64_t iteration = 0;  // inner steps taken over the whole run
  int epoch = 0;
  std::int64_t draws = 0;
  std::int64_t full_evals = 0;
  std::int64_t oracle_calls = 0;  // draws + nnz(A) * full_evals
  std::int64_t work_units = 0;    // per-draw cost + nnz(A) * full_evals
  std::optional<double> distance;
  std::optional<double> gap;
  double elapsed = 0.0;  // seconds
  bool epoch_end = false;
};

struct RunTrace {
  SolverConfig config;
  std::vector<TraceRecord> records;
  // The iterate reported at each record when config.keep_iterates is set:
  // the restart point at epoch ends, z_k otherwise.
  std::vector<Iterate> iterates;
  Iterate final_iterate;
  // Lazy engine only: time spent in steps outside snapshot refreshes.
  double step_seconds = 0.0;
  std::int64_t refreshes = 0;
};

struct RunResult {
  Iterate solution;
  RunTrace trace;
};

// K steps of sEGM from z0; returns the average of the K half-iterates.
RunResult segm_run(const SaddleProblem& problem, const StochasticOracle& oracle,
                   const SolverConfig& config, const Iterate& z0,
                   RandomStream& rng);

// T epochs of sEGM, each restarted from the previous average.
RunResult rsegm_run(const SaddleProblem& problem, const StochasticOracle& oracle,
                    const SolverConfig& config, const Iterate& z0,
                    RandomStream& rng);

// segm_run through the just-in-time engine. Bilinear problems and
// coordinate oracles only.
RunResult lazy_segm_run(const SaddleProblem& problem,
                        const StochasticOracle& oracle,
                        const SolverConfig& config, const Iterate& z0,
                        RandomStream& rng);

// Full-gradient EGM restarted from its half-iterate average every K steps,
// for T epochs.
RunResult deterministic_restarted_egm(const SaddleProblem& problem,
                                      const SolverConfig& config,
                                      const Iterate& z0);

// K * T plain EGM steps; returns the last iterate.
RunResult deterministic_egm(const SaddleProblem& problem,
                            const SolverConfig& config, const Iterate& z0);

// Dispatches on config.algorithm. segm-norestart runs one epoch of K * T.
RunResult solve(const SaddleProblem& problem, const SolverConfig& config,
                const Iterate& z0);

}  // namespace rsegm
