// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsegm/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "rsegm/diagnostics.hpp"
#include "rsegm/errors.hpp"
#include "rsegm/lazy_engine.hpp"

namespace rsegm {

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::kRsegm: return "rsegm";
    case Algorithm::kSegmNoRestart: return "segm-norestart";
    case Algorithm::kDetRestart: return "det-restart";
    case Algorithm::kDetEgm: return "det-egm";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view tag) {
  for (Algorithm a : {Algorithm::kRsegm, Algorithm::kSegmNoRestart,
                      Algorithm::kDetRestart, Algorithm::kDetEgm}) {
    if (tag == to_string(a)) return a;
  }
  throw ArgumentError(fmt::format(
      "unknown algorithm '{}' (expected rsegm, segm-norestart, det-restart or "
      "det-egm)", tag));
}

double default_p(OracleKind kind, const SparseMatrixDual& a) {
  if (kind == OracleKind::kFull || a.nnz() == 0) return 1.0;
  const double nnz = static_cast<double>(a.nnz());
  const double p = is_row_column(kind)
                       ? static_cast<double>(a.nrows() + a.ncols()) / nnz
                       : 1.0 / nnz;
  return std::min(p, 1.0);
}

namespace {

bool is_deterministic(Algorithm a) {
  return a == Algorithm::kDetRestart || a == Algorithm::kDetEgm;
}

std::optional<double> measurable_distance(const SaddleProblem& problem,
                                          const Iterate& z) {
  try {
    return distance_to_optimum(problem, z);
  } catch (const InfeasibleError&) {
    return std::nullopt;
  } catch (const UnsupportedError&) {
    return std::nullopt;
  }
}

}  // namespace

SolverConfig resolve_config(const SaddleProblem& problem,
                            const SolverOptions& options, const Iterate& z0) {
  if (z0.n() != problem.n() || z0.m() != problem.m()) {
    throw StructuralError("starting point does not match the problem shape");
  }
  SolverConfig c;
  c.algorithm = options.algorithm;
  c.oracle = is_deterministic(c.algorithm) ? OracleKind::kFull : options.oracle;
  c.seed = options.seed;
  c.record_every = options.record_every;
  c.lazy = options.lazy;
  c.gap_radius = options.gap_radius;
  c.keep_iterates = options.keep_iterates;
  c.eps = options.eps;
  c.k_multiplier = options.k_multiplier;

  if (c.record_every < 0) throw ArgumentError("record interval must be >= 0");
  if (!(c.gap_radius > 0.0)) throw ArgumentError("gap radius must be positive");
  if (!(c.k_multiplier > 0.0)) throw ArgumentError("K multiplier must be positive");

  if (is_deterministic(c.algorithm)) {
    if (options.p && *options.p != 1.0) {
      throw ArgumentError("deterministic algorithms run with p = 1");
    }
    c.p = 1.0;
  } else {
    c.p = options.p.value_or(default_p(c.oracle, problem.matrix()));
  }
  if (!(c.p > 0.0 && c.p <= 1.0)) {
    throw ArgumentError(fmt::format("p = {} outside (0, 1]", c.p));
  }

  if (c.lazy) {
    if (!problem.is_bilinear()) {
      throw UnsupportedError("the lazy engine needs an unconstrained bilinear problem");
    }
    if (!is_coordinate(c.oracle) || is_deterministic(c.algorithm)) {
      throw UnsupportedError("the lazy engine needs a coordinate oracle");
    }
  }

  c.lipschitz = lipschitz_bound(c.oracle, problem.matrix(), problem.norms());
  if (options.tau) {
    c.tau = *options.tau;
  } else {
    if (!(c.lipschitz > 0.0)) {
      throw ArgumentError("default step size needs a nonzero matrix; pass tau");
    }
    c.tau = std::sqrt(c.p) / (2.0 * c.lipschitz);
  }
  if (!(c.tau > 0.0) || !std::isfinite(c.tau)) {
    throw ArgumentError(fmt::format("step size {} must be positive", c.tau));
  }

  c.initial_distance = measurable_distance(problem, z0);
  if (options.restarts) {
    c.restarts = *options.restarts;
  } else {
    if (!c.eps || !c.initial_distance) {
      throw ArgumentError(
          "restart count T needs --restarts-T, or --eps with a problem whose "
          "distance to optimum is measurable");
    }
    if (!(*c.eps > 0.0)) throw ArgumentError("eps must be positive");
    const double ratio = *c.initial_distance / *c.eps;
    c.restarts = ratio <= 1.0 ? 0 : static_cast<int>(std::ceil(std::log2(ratio)));
  }
  if (c.restarts < 0) throw ArgumentError("restart count must be >= 0");

  if (options.inner_iters) {
    c.inner_iters = *options.inner_iters;
  } else {
    const std::optional<double>& alpha = problem.norms().sigma_min_plus;
    if (!alpha || !(*alpha > 0.0)) {
      throw ArgumentError(
          "default K needs sigma_min_plus(A), unavailable here; pass --inner-K");
    }
    const double kappa = c.lipschitz / *alpha;
    double k = 0.0;
    if (is_deterministic(c.algorithm)) {
      k = kDetRestartFactor * kappa;
    } else {
      const double t = std::max(c.restarts, 1);
      k = c.k_multiplier * kappa * t * t / std::sqrt(c.p);
    }
    c.inner_iters = static_cast<std::int64_t>(std::ceil(k));
  }
  if (c.inner_iters < 1) throw ArgumentError("inner iteration count K must be >= 1");
  return c;
}

SegmState::SegmState(const SaddleProblem& problem, const StochasticOracle& oracle,
                     double p, double tau, const Iterate& z0)
    : SegmState(problem, oracle, p, tau, z0, z0) {}

SegmState::SegmState(const SaddleProblem& problem, const StochasticOracle& oracle,
                     double p, double tau, const Iterate& z, const Iterate& w)
    : problem_(problem), oracle_(oracle), p_(p), tau_(tau), z_(z), w_(w),
      fw_(problem.dim()), v_(problem.dim()), zh_(problem.dim()),
      next_(problem.dim()), half_sum_(problem.dim(), 0.0) {
  if (z.size() != problem.dim() || w.size() != problem.dim()) {
    throw StructuralError("starting point does not match the problem dimension");
  }
  full_operator_into(problem_, w_.values(), fw_);
}

void SegmState::prepare() {
  for (std::size_t c = 0; c < v_.size(); ++c) {
    v_[c] = (1.0 - p_) * z_[c] + p_ * w_[c] - tau_ * fw_[c];
  }
  zh_ = v_;
  prox_in_place(problem_, zh_, tau_);
}

void SegmState::candidate(const OracleDraw& d, std::span<double> out) const {
  std::copy(v_.begin(), v_.end(), out.begin());
  oracle_.add_difference(d, zh_, w_.values(), -tau_, out);
  prox_in_place(problem_, out, tau_);
}

SegmState::StepInfo SegmState::step(RandomStream& rng) {
  prepare();
  StepInfo info;
  info.draw = oracle_.draw(rng);
  candidate(info.draw, next_);
  for (std::size_t c = 0; c < next_.size(); ++c) {
    half_sum_[c] += zh_[c];
    z_[c] = next_[c];
  }
  ++steps_;
  if (uniform01(rng) < p_) {
    w_ = z_;
    full_operator_into(problem_, w_.values(), fw_);
    info.refreshed = true;
  }
  return info;
}

Iterate SegmState::average() const {
  Iterate out(problem_.n(), problem_.m());
  const double inv = steps_ > 0 ? 1.0 / static_cast<double>(steps_) : 0.0;
  for (std::size_t c = 0; c < half_sum_.size(); ++c) out[c] = half_sum_[c] * inv;
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct EpochOutput {
  Iterate average;
  Iterate last;
};

// Shared bookkeeping of one run: counters, records, divergence checks.
class RunContext {
 public:
  RunContext(const SaddleProblem& problem, const StochasticOracle& oracle,
             const SolverConfig& config, RunTrace& trace)
      : problem_(problem), oracle_(oracle), config_(config), trace_(trace),
        nnz_(static_cast<std::int64_t>(problem.matrix().nnz())),
        start_(Clock::now()) {
    trace_.config = config;
    if (oracle.dim() != problem.dim()) {
      throw StructuralError("oracle does not match the problem");
    }
  }

  const SaddleProblem& problem() const { return problem_; }
  const StochasticOracle& oracle() const { return oracle_; }
  const SolverConfig& config() const { return config_; }
  RunTrace& trace() { return trace_; }

  void count_sample(const OracleDraw& d) {
    if (oracle_.kind() == OracleKind::kFull) {
      ++full_evals_;
    } else {
      draws_ += oracle_.draws_per_sample();
      work_ += static_cast<std::int64_t>(oracle_.draw_cost(d));
    }
  }
  void count_full_eval() { ++full_evals_; }
  void advance() { ++iteration_; }
  std::int64_t iteration() const { return iteration_; }

  bool due() const {
    return config_.record_every > 0 && iteration_ % config_.record_every == 0;
  }

  void check_finite(std::span<const double> z) const {
    for (double v : z) {
      if (!std::isfinite(v)) {
        throw DivergenceError(
            fmt::format("non-finite iterate at step {}", iteration_), iteration_);
      }
    }
  }
  void check_finite(double v) const { check_finite(std::span<const double>(&v, 1)); }

  void record(const Iterate& z, int epoch, bool epoch_end) {
    TraceRecord r;
    r.iteration = iteration_;
    r.epoch = epoch;
    r.draws = draws_;
    r.full_evals = full_evals_;
    r.oracle_calls = draws_ + nnz_ * full_evals_;
    r.work_units = work_ + nnz_ * full_evals_;
    if (distance_ok_) {
      r.distance = measurable_distance(problem_, z);
      distance_ok_ = r.distance.has_value();
    }
    try {
      r.gap = normalized_duality_gap(problem_, z, config_.gap_radius);
    } catch (const Error&) {
      // Outside the domain (a user-supplied start) or a failed bisection.
    }
    r.elapsed = seconds_since(start_);
    r.epoch_end = epoch_end;
    trace_.records.push_back(r);
    if (config_.keep_iterates) trace_.iterates.push_back(z);
  }

 private:
  const SaddleProblem& problem_;
  const StochasticOracle& oracle_;
  const SolverConfig& config_;
  RunTrace& trace_;
  std::int64_t nnz_;
  Clock::time_point start_;
  std::int64_t iteration_ = 0;
  std::int64_t draws_ = 0;
  std::int64_t full_evals_ = 0;
  std::int64_t work_ = 0;
  bool distance_ok_ = true;
};

EpochOutput dense_epoch(RunContext& ctx, const Iterate& start, std::int64_t k_iters,
                        int epoch, RandomStream& rng) {
  SegmState state(ctx.problem(), ctx.oracle(), ctx.config().p, ctx.config().tau,
                  start);
  ctx.count_full_eval();
  for (std::int64_t k = 0; k < k_iters; ++k) {
    const SegmState::StepInfo info = state.step(rng);
    ctx.count_sample(info.draw);
    ctx.advance();
    ctx.check_finite(state.z().values());
    if (info.refreshed) ctx.count_full_eval();
    if (ctx.due()) ctx.record(state.z(), epoch, false);
  }
  return {state.average(), state.z()};
}

EpochOutput lazy_epoch(RunContext& ctx, const Iterate& start, std::int64_t k_iters,
                       int epoch, RandomStream& rng) {
  const SaddleProblem& problem = ctx.problem();
  const StochasticOracle& oracle = ctx.oracle();
  const double p = ctx.config().p;
  const double tau = ctx.config().tau;
  const std::size_t dim = problem.dim();
  const auto epoch_start = Clock::now();
  double excluded = 0.0;

  std::vector<double> w(start.vector());
  std::vector<double> fw(dim), u(dim);
  auto set_drift = [&] {
    full_operator_into(problem, w, fw);
    ctx.count_full_eval();
    for (std::size_t c = 0; c < dim; ++c) u[c] = p * w[c] - tau * fw[c];
  };
  set_drift();
  LazyIterateState state(p, w, u);
  std::vector<double> half_total(dim, 0.0);
  std::vector<std::pair<std::size_t, double>> deltas;
  deltas.reserve(2);

  for (std::int64_t k = 0; k < k_iters; ++k) {
    const OracleDraw d = oracle.draw(rng);
    const auto [ys, xs] = oracle.source_coordinates(d);
    const double hy = state.read_half(ys) - w[ys];
    const double hx = state.read_half(xs) - w[xs];
    deltas.clear();
    oracle.visit(d, hy, hx, [&](std::size_t c, double val) {
      deltas.emplace_back(c, -tau * val);
    });
    state.step(deltas);
    ctx.count_sample(d);
    ctx.advance();
    for (const auto& entry : deltas) ctx.check_finite(state.read(entry.first));

    if (uniform01(rng) < p) {
      const auto t0 = Clock::now();
      const std::vector<double> hs = state.half_sum();
      for (std::size_t c = 0; c < dim; ++c) half_total[c] += hs[c];
      w = state.materialize();
      ctx.check_finite(w);
      set_drift();
      state.refresh(w, u);
      ++ctx.trace().refreshes;
      excluded += seconds_since(t0);
    }
    if (ctx.due()) {
      const auto t0 = Clock::now();
      ctx.record(Iterate(problem.n(), problem.m(), state.materialize()), epoch, false);
      excluded += seconds_since(t0);
    }
  }

  const std::vector<double> hs = state.half_sum();
  EpochOutput out{Iterate(problem.n(), problem.m()),
                  Iterate(problem.n(), problem.m(), state.materialize())};
  const double inv = 1.0 / static_cast<double>(k_iters);
  for (std::size_t c = 0; c < dim; ++c) out.average[c] = (half_total[c] + hs[c]) * inv;
  ctx.check_finite(out.average.values());
  ctx.trace().step_seconds += seconds_since(epoch_start) - excluded;
  return out;
}

EpochOutput run_epoch(RunContext& ctx, const Iterate& start, std::int64_t k_iters,
                      int epoch, RandomStream& rng) {
  return ctx.config().lazy ? lazy_epoch(ctx, start, k_iters, epoch, rng)
                           : dense_epoch(ctx, start, k_iters, epoch, rng);
}

void check_lazy(const SaddleProblem& problem, const StochasticOracle& oracle) {
  if (!problem.is_bilinear()) {
    throw UnsupportedError("the lazy engine needs an unconstrained bilinear problem");
  }
  if (!is_coordinate(oracle.kind())) {
    throw UnsupportedError("the lazy engine needs a coordinate oracle");
  }
}

RunResult single_epoch(const SaddleProblem& problem, const StochasticOracle& oracle,
                       const SolverConfig& config, const Iterate& z0,
                       std::int64_t k_iters, RandomStream& rng) {
  RunResult result;
  RunContext ctx(problem, oracle, config, result.trace);
  ctx.record(z0, 0, true);
  EpochOutput out = run_epoch(ctx, z0, k_iters, 0, rng);
  result.solution = std::move(out.average);
  ctx.record(result.solution, 1, true);
  result.trace.final_iterate = result.solution;
  return result;
}

RunResult restarted(const SaddleProblem& problem, const StochasticOracle& oracle,
                    const SolverConfig& config, const Iterate& z0,
                    RandomStream& rng) {
  RunResult result;
  RunContext ctx(problem, oracle, config, result.trace);
  Iterate z = z0;
  ctx.record(z, 0, true);
  for (int t = 0; t < config.restarts; ++t) {
    z = run_epoch(ctx, z, config.inner_iters, t, rng).average;
    ctx.record(z, t + 1, true);
  }
  result.solution = z;
  result.trace.final_iterate = std::move(z);
  return result;
}

SolverConfig deterministic_config(const SaddleProblem& problem, SolverConfig config) {
  config.oracle = OracleKind::kFull;
  config.p = 1.0;
  config.lazy = false;
  if (!(config.tau > 0.0)) {
    config.lipschitz = problem.norms().spectral;
    config.tau = 0.5 / config.lipschitz;
  }
  return config;
}

}  // namespace

RunResult segm_run(const SaddleProblem& problem, const StochasticOracle& oracle,
                   const SolverConfig& config, const Iterate& z0,
                   RandomStream& rng) {
  SolverConfig c = config;
  c.lazy = false;
  return single_epoch(problem, oracle, c, z0, c.inner_iters, rng);
}

RunResult lazy_segm_run(const SaddleProblem& problem,
                        const StochasticOracle& oracle,
                        const SolverConfig& config, const Iterate& z0,
                        RandomStream& rng) {
  check_lazy(problem, oracle);
  SolverConfig c = config;
  c.lazy = true;
  return single_epoch(problem, oracle, c, z0, c.inner_iters, rng);
}

RunResult rsegm_run(const SaddleProblem& problem, const StochasticOracle& oracle,
                    const SolverConfig& config, const Iterate& z0,
                    RandomStream& rng) {
  if (config.lazy) check_lazy(problem, oracle);
  return restarted(problem, oracle, config, z0, rng);
}

RunResult deterministic_restarted_egm(const SaddleProblem& problem,
                                      const SolverConfig& config,
                                      const Iterate& z0) {
  const SolverConfig c = deterministic_config(problem, config);
  const StochasticOracle oracle = make_oracle(OracleKind::kFull, problem);
  RandomStream rng(c.seed);
  return restarted(problem, oracle, c, z0, rng);
}

RunResult deterministic_egm(const SaddleProblem& problem,
                            const SolverConfig& config, const Iterate& z0) {
  const SolverConfig c = deterministic_config(problem, config);
  const StochasticOracle oracle = make_oracle(OracleKind::kFull, problem);
  RandomStream rng(c.seed);
  RunResult result;
  RunContext ctx(problem, oracle, c, result.trace);
  ctx.record(z0, 0, true);
  EpochOutput out = dense_epoch(
      ctx, z0, c.inner_iters * std::max<std::int64_t>(c.restarts, 1), 0, rng);
  result.solution = std::move(out.last);
  ctx.record(result.solution, 1, true);
  result.trace.final_iterate = result.solution;
  return result;
}

RunResult solve(const SaddleProblem& problem, const SolverConfig& config,
                const Iterate& z0) {
  switch (config.algorithm) {
    case Algorithm::kDetRestart:
      return deterministic_restarted_egm(problem, config, z0);
    case Algorithm::kDetEgm:
      return deterministic_egm(problem, config, z0);
    default:
      break;
  }
  const StochasticOracle oracle = make_oracle(config.oracle, problem);
  RandomStream rng(config.seed);
  if (config.algorithm == Algorithm::kSegmNoRestart) {
    if (config.lazy) check_lazy(problem, oracle);
    return single_epoch(problem, oracle, config, z0,
                        config.inner_iters * std::max(config.restarts, 1), rng);
  }
  return rsegm_run(problem, oracle, config, z0, rng);
}

}  // namespace rsegm
