// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "rsegm/errors.hpp"
#include "rsegm/generators.hpp"
#include "rsegm/solver.hpp"
#include "support/reference.hpp"

namespace rsegm {
namespace {

SaddleProblem identity2(std::vector<double> b = {0, 0}) {
  return SaddleProblem::bilinear(
      std::make_shared<const SparseMatrixDual>(
          build_matrix(2, 2, std::vector<Triplet>{{0, 0, 1}, {1, 1, 1}})),
      std::move(b), {0, 0});
}

SolverConfig config_for(const SaddleProblem& problem, SolverOptions o,
                        const Iterate& z0) {
  return resolve_config(problem, o, z0);
}

Iterate random_point(const SaddleProblem& p, std::uint64_t seed, double scale = 1.0) {
  RandomStream rng(seed);
  Iterate z = p.zero_iterate();
  for (double& v : z.values()) v = scale * standard_normal(rng);
  return z;
}

TEST(Algorithms, Tags) {
  for (Algorithm a : {Algorithm::kRsegm, Algorithm::kSegmNoRestart, Algorithm::kDetRestart,
                      Algorithm::kDetEgm}) {
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  }
  EXPECT_THROW(parse_algorithm("pdhg"), ArgumentError);
}

TEST(Config, Defaults) {
  const SaddleProblem p = generate_bilinear(10, 12, 4, 0.5, 1);
  const std::size_t nnz = p.matrix().nnz();
  SolverOptions o;
  o.restarts = 2;
  SolverConfig c = config_for(p, o, p.zero_iterate());
  EXPECT_DOUBLE_EQ(c.p, 22.0 / static_cast<double>(nnz));
  EXPECT_DOUBLE_EQ(c.tau, std::sqrt(c.p) / (2.0 * p.norms().frobenius));
  const double alpha = *p.norms().sigma_min_plus;
  EXPECT_EQ(c.inner_iters,
            static_cast<std::int64_t>(std::ceil(p.norms().frobenius / alpha * 4.0 / std::sqrt(c.p))));
  o.oracle = OracleKind::kCoordFro;
  EXPECT_DOUBLE_EQ(config_for(p, o, p.zero_iterate()).p, 1.0 / static_cast<double>(nnz));
  o.algorithm = Algorithm::kDetRestart;
  c = config_for(p, o, p.zero_iterate());
  EXPECT_EQ(c.oracle, OracleKind::kFull);
  EXPECT_EQ(c.p, 1.0);
}

TEST(Config, RestartCountFromTolerance) {
  // z0 at distance 8 from the unique solution (0, 0, 0, 0).
  const SaddleProblem p = identity2();
  SolverOptions o;
  o.eps = 1.0;
  o.inner_iters = 5;
  const SolverConfig c = config_for(p, o, Iterate(2, 2, {8, 0, 0, 0}));
  EXPECT_EQ(c.restarts, 3);
  ASSERT_TRUE(c.initial_distance);
  EXPECT_DOUBLE_EQ(*c.initial_distance, 8.0);
}

TEST(Config, Errors) {
  const SaddleProblem p = identity2();
  const Iterate z0 = p.zero_iterate();
  SolverOptions o;
  EXPECT_THROW(config_for(p, o, z0), ArgumentError);  // no T, no eps
  o.restarts = 1;
  o.p = 1.5;
  EXPECT_THROW(config_for(p, o, z0), ArgumentError);
  o.p.reset();
  o.tau = -1.0;
  EXPECT_THROW(config_for(p, o, z0), ArgumentError);
  o.tau.reset();
  o.lazy = true;
  EXPECT_THROW(config_for(p, o, z0), UnsupportedError);  // row-column oracle
  o.oracle = OracleKind::kCoordFro;
  EXPECT_NO_THROW(config_for(p, o, z0));
  o.lazy = false;
  EXPECT_THROW(config_for(p, o, Iterate(3, 2)), StructuralError);
  const SaddleProblem lp = counterexample_lp();
  o.lazy = true;
  EXPECT_THROW(config_for(lp, o, lp.zero_iterate()), UnsupportedError);
}

TEST(Segm, MatchesHandUnrolledRecursion) {
  const SaddleProblem p = generate_bilinear(2, 2, 2, 1.0, 31);
  const Iterate z0 = random_point(p, 1);
  for (OracleKind kind : {OracleKind::kUniformRc, OracleKind::kImportanceRc,
                          OracleKind::kCoordL1, OracleKind::kCoordFro, OracleKind::kFull}) {
    SolverOptions o;
    o.oracle = kind;
    o.p = 0.5;
    o.inner_iters = 3;
    o.restarts = 1;
    const SolverConfig c = config_for(p, o, z0);
    RandomStream a(77), b(77);
    const RunResult run = segm_run(p, make_oracle(kind, p), c, z0, a);
    const Iterate ref = testing::reference_segm(p, kind, c.p, c.tau, 3, z0, b);
    for (std::size_t k = 0; k < ref.size(); ++k) {
      EXPECT_NEAR(run.solution[k], ref[k], 1e-14) << to_string(kind);
    }
  }
}

TEST(Segm, MatchesReferenceOnLp) {
  const SaddleProblem p = generate_lp_known_solution(3, 5, 2);
  Iterate z0 = random_point(p, 2);
  for (double& v : z0.x()) v = std::abs(v);
  SolverOptions o;
  o.oracle = OracleKind::kImportanceRc;
  o.p = 0.3;
  o.inner_iters = 200;
  o.restarts = 1;
  const SolverConfig c = config_for(p, o, z0);
  RandomStream a(5), b(5);
  const RunResult run = segm_run(p, make_oracle(o.oracle, p), c, z0, a);
  const Iterate ref = testing::reference_segm(p, o.oracle, c.p, c.tau, 200, z0, b);
  for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(run.solution[k], ref[k], 1e-12);
}

TEST(Segm, FullOracleIsDeterministicEgm) {
  const SaddleProblem p = generate_bilinear(4, 3, 2, 1.0, 3);
  const Iterate z0 = random_point(p, 3);
  SolverOptions o;
  o.oracle = OracleKind::kFull;
  o.p = 1.0;
  o.inner_iters = 25;
  o.restarts = 1;
  SolverConfig c = config_for(p, o, z0);
  RandomStream rng(1);
  const RunResult stochastic = segm_run(p, make_oracle(OracleKind::kFull, p), c, z0, rng);
  o.algorithm = Algorithm::kDetRestart;
  o.tau = c.tau;
  const RunResult det = solve(p, config_for(p, o, z0), z0);
  EXPECT_EQ(stochastic.solution, det.solution);
}

TEST(Segm, SolutionIsFixedPoint) {
  const SaddleProblem p = identity2();
  SolverOptions o;
  o.inner_iters = 50;
  o.restarts = 3;
  for (OracleKind kind : {OracleKind::kImportanceRc, OracleKind::kCoordFro}) {
    o.oracle = kind;
    const RunResult r = solve(p, config_for(p, o, p.zero_iterate()), p.zero_iterate());
    for (double v : r.solution.values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(Rsegm, SingleEpochEqualsSegm) {
  const SaddleProblem p = generate_bilinear(5, 6, 3, 1.0, 8);
  const Iterate z0 = random_point(p, 4);
  SolverOptions o;
  o.inner_iters = 300;
  o.restarts = 1;
  o.seed = 12;
  const SolverConfig c = config_for(p, o, z0);
  const StochasticOracle oracle = make_oracle(c.oracle, p);
  RandomStream a(12), b(12);
  EXPECT_EQ(rsegm_run(p, oracle, c, z0, a).solution, segm_run(p, oracle, c, z0, b).solution);
  EXPECT_EQ(solve(p, c, z0).solution, rsegm_run(p, oracle, c, z0, b = RandomStream(12)).solution);
}

TEST(Rsegm, TraceAccounting) {
  const SaddleProblem p = generate_bilinear(5, 6, 3, 1.0, 8);
  const Iterate z0 = random_point(p, 4);
  SolverOptions o;
  o.oracle = OracleKind::kCoordFro;
  o.inner_iters = 100;
  o.restarts = 4;
  o.record_every = 25;
  const RunResult r = solve(p, config_for(p, o, z0), z0);
  const TraceRecord& last = r.trace.records.back();
  EXPECT_EQ(last.iteration, 400);
  EXPECT_EQ(last.epoch, 4);
  EXPECT_TRUE(last.epoch_end);
  EXPECT_EQ(last.draws, 800);  // two entry draws per step
  const auto nnz = static_cast<std::int64_t>(p.matrix().nnz());
  EXPECT_EQ(last.oracle_calls, last.draws + nnz * last.full_evals);
  EXPECT_EQ(last.work_units, last.draws + nnz * last.full_evals);
  int ends = 0;
  for (const TraceRecord& rec : r.trace.records) {
    ends += rec.epoch_end ? 1 : 0;
    EXPECT_TRUE(rec.distance.has_value());
  }
  EXPECT_EQ(ends, 5);
}

TEST(Lazy, MatchesDensePath) {
  const SaddleProblem p = generate_bilinear(50, 60, 10, 1.0, 5);
  const Iterate z0 = random_point(p, 6);
  for (double pr : {1.0 / static_cast<double>(p.matrix().nnz()), 0.01, 1.0}) {
    SolverOptions o;
    o.oracle = OracleKind::kCoordFro;
    o.algorithm = Algorithm::kSegmNoRestart;
    o.p = pr;
    o.inner_iters = 10000;
    o.restarts = 1;
    o.record_every = 1000;
    o.keep_iterates = true;
    const SolverConfig dense = config_for(p, o, z0);
    o.lazy = true;
    const SolverConfig lazy = config_for(p, o, z0);
    const RunResult a = solve(p, dense, z0);
    const RunResult b = solve(p, lazy, z0);
    ASSERT_EQ(a.trace.iterates.size(), b.trace.iterates.size());
    for (std::size_t r = 0; r < a.trace.iterates.size(); ++r) {
      const double scale = std::max(1.0, norm2(a.trace.iterates[r].values()));
      EXPECT_LE(distance(a.trace.iterates[r].values(), b.trace.iterates[r].values()),
                1e-9 * scale)
          << "p=" << pr << " record " << r;
    }
    EXPECT_EQ(a.trace.records.back().draws, b.trace.records.back().draws);
    EXPECT_EQ(a.trace.records.back().full_evals, b.trace.records.back().full_evals);
  }
}

TEST(DetRestart, IdentityContractsMonotonically) {
  const SaddleProblem p = identity2();
  const Iterate z0(2, 2, {1, 0, 0, 0});
  SolverOptions o;
  o.algorithm = Algorithm::kDetRestart;
  o.restarts = 10;
  const RunResult r = solve(p, config_for(p, o, z0), z0);
  double previous = INFINITY;
  for (const TraceRecord& rec : r.trace.records) {
    if (!rec.epoch_end) continue;
    EXPECT_LT(*rec.distance, previous);
    previous = *rec.distance;
  }
  EXPECT_LT(previous, 1e-3);
}

TEST(DetRestart, UnitRestartLengthIteratesHalfStep) {
  const SaddleProblem p = generate_bilinear(3, 3, 3, 1.0, 2);
  const Iterate z0 = random_point(p, 9);
  SolverOptions o;
  o.algorithm = Algorithm::kDetRestart;
  o.inner_iters = 1;
  o.restarts = 6;
  const SolverConfig c = config_for(p, o, z0);
  const RunResult r = solve(p, c, z0);
  Iterate z = z0;
  for (int t = 0; t < 6; ++t) {
    const std::vector<double> f = full_operator(p, z);
    for (std::size_t k = 0; k < z.size(); ++k) z[k] -= c.tau * f[k];
  }
  for (std::size_t k = 0; k < z.size(); ++k) EXPECT_NEAR(r.solution[k], z[k], 1e-14);
}

TEST(DetEgm, CounterexampleConverges) {
  const SaddleProblem p = counterexample_lp();
  const Iterate z0(2, 1, {5, 3, 1});
  SolverOptions o;
  o.algorithm = Algorithm::kDetRestart;
  o.eps = 1e-6;
  const RunResult r = solve(p, config_for(p, o, z0), z0);
  EXPECT_LE(distance_to_optimum(p, r.solution), 1e-6);
}

TEST(Divergence, OversizedStepRaises) {
  const SaddleProblem p = generate_bilinear(5, 5, 5, 1.0, 3);
  const Iterate z0 = random_point(p, 1);
  SolverOptions o;
  o.tau = 1e3;
  o.inner_iters = 100000;
  o.restarts = 1;
  EXPECT_THROW(solve(p, config_for(p, o, z0), z0), DivergenceError);
}

}  // namespace
}  // namespace rsegm
