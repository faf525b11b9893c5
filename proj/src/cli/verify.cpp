// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "rsegm/cli.hpp"
#include "rsegm/diagnostics.hpp"
#include "rsegm/errors.hpp"
#include "rsegm/generators.hpp"
#include "rsegm/oracle.hpp"
#include "rsegm/probes.hpp"
#include "rsegm/random.hpp"
#include "rsegm/solver.hpp"

namespace rsegm {

namespace {

constexpr OracleKind kAllKinds[] = {OracleKind::kFull, OracleKind::kUniformRc,
                                    OracleKind::kImportanceRc, OracleKind::kCoordL1,
                                    OracleKind::kCoordFro};

Iterate random_iterate(const SaddleProblem& problem, RandomStream& rng,
                       double scale = 1.0) {
  Iterate z = problem.zero_iterate();
  for (double& v : z.values()) v = scale * standard_normal(rng);
  return z;
}

SuiteResult unbiasedness(double bias, std::uint64_t seed) {
  double worst = 0.0;
  for (int inst = 0; inst < 4; ++inst) {
    const SaddleProblem problem =
        generate_bilinear(5 + inst % 3, 6 - inst % 2, 3, 0.7, mix_seed(seed, inst));
    RandomStream rng(mix_seed(seed, 100 + inst));
    for (OracleKind kind : kAllKinds) {
      const StochasticOracle oracle = make_oracle(kind, problem).with_bias(bias);
      for (int k = 0; k < 5; ++k) {
        const Iterate z = random_iterate(problem, rng);
        const std::vector<double> expected = exhaustive_expectation(oracle, z);
        const std::vector<double> exact = full_operator(problem, z);
        worst = std::max(worst, distance(expected, exact) / (1.0 + norm2(exact)));
      }
    }
  }
  return {"unbiasedness", worst <= 1e-12,
          fmt::format("max relative error {:.3e} (tol 1e-12)", worst)};
}

SuiteResult lipschitz(double bias, std::uint64_t seed) {
  double worst = 0.0;
  for (int inst = 0; inst < 3; ++inst) {
    const SaddleProblem problem =
        generate_bilinear(6, 7, 4, 0.6, mix_seed(seed, inst));
    RandomStream rng(mix_seed(seed, 200 + inst));
    for (OracleKind kind : kAllKinds) {
      const StochasticOracle base = make_oracle(kind, problem);
      const double l = base.lipschitz_bound();
      const double ratio = empirical_lipschitz_check(base.with_bias(bias), 30, rng);
      worst = std::max(worst, ratio / (l * l));
    }
  }
  return {"lipschitz", worst <= 1.0 + 1e-9,
          fmt::format("max E|dF|^2 / (L^2 |du|^2) = {:.6f}", worst)};
}

SuiteResult lazy(std::uint64_t seed) {
  const SaddleProblem problem = generate_bilinear(20, 30, 6, 0.5, seed);
  double worst = 0.0;
  for (int s = 0; s < 5; ++s) {
    SolverOptions o;
    o.oracle = OracleKind::kCoordFro;
    o.algorithm = Algorithm::kSegmNoRestart;
    o.inner_iters = 2000;
    o.restarts = 1;
    o.seed = mix_seed(seed, s);
    o.record_every = 250;
    const Iterate z0 = problem.zero_iterate();
    SolverConfig dense_cfg = resolve_config(problem, o, z0);
    o.lazy = true;
    SolverConfig lazy_cfg = resolve_config(problem, o, z0);
    const RunResult dense = solve(problem, dense_cfg, z0);
    const RunResult fast = solve(problem, lazy_cfg, z0);
    const double scale = std::max(1.0, norm2(dense.solution.values()));
    worst = std::max(worst,
                     distance(dense.solution.values(), fast.solution.values()) / scale);
  }
  return {"lazy", worst <= 1e-9,
          fmt::format("max relative lazy/dense difference {:.3e}", worst)};
}

SuiteResult descent(std::uint64_t seed) {
  const SaddleProblem problem = generate_bilinear(2, 3, 2, 1.0, seed);
  RandomStream rng(mix_seed(seed, 1));
  double worst = -INFINITY;
  for (double p : {0.1, 0.5}) {
    const StochasticOracle oracle = make_oracle(OracleKind::kImportanceRc, problem);
    const double tau = std::sqrt(p) / (2.0 * oracle.lipschitz_bound());
    for (int k = 0; k < 20; ++k) {
      const Iterate z = random_iterate(problem, rng, 3.0);
      const Iterate w = random_iterate(problem, rng, 3.0);
      const Iterate star = project_to_optimal_set(problem, z);
      const DescentCheck d = descent_check(problem, oracle, p, tau, z, w, star);
      worst = std::max(worst, d.expected_next - d.current);
    }
  }
  return {"descent", worst <= 1e-10,
          fmt::format("max E[phi_next] - phi = {:.3e}", worst)};
}

SuiteResult sharpness(std::uint64_t seed) {
  double worst = INFINITY;
  for (int inst = 0; inst < 3; ++inst) {
    const SaddleProblem problem =
        generate_bilinear(8, 10, 4, 0.8, mix_seed(seed, inst));
    const double alpha = *problem.norms().sigma_min_plus;
    RandomStream rng(mix_seed(seed, 300 + inst));
    for (int k = 0; k < 50; ++k) {
      const Iterate z = random_iterate(problem, rng, 2.0);
      const double dist = distance_to_optimum(problem, z);
      for (double r : {0.1, 1.0, 10.0}) {
        const double rho = normalized_duality_gap(problem, z, r);
        if (dist > 0.0) worst = std::min(worst, rho / (alpha * dist));
      }
    }
  }
  return {"sharpness", worst >= 1.0 - 1e-8,
          fmt::format("min rho / (alpha dist) = {:.12f}", worst)};
}

SuiteResult counterexample() {
  const SaddleProblem problem = counterexample_lp();
  const double t = 1e6;
  Iterate z = problem.zero_iterate();
  z[0] = t;
  const double ratio =
      subdifferential_distance(problem, z) / distance_to_optimum(problem, z);
  return {"counterexample", ratio <= 1e-5,
          fmt::format("dist(0, dL) / dist(z, Z*) at t=1e6: {:.3e}", ratio)};
}

}  // namespace

std::vector<std::string> verify_suite_names() {
  return {"unbiasedness", "lipschitz", "lazy", "descent", "sharpness", "counterexample"};
}

SuiteResult run_verify_suite(const std::string& name, double bias,
                             std::uint64_t seed) {
  try {
    if (name == "unbiasedness") return unbiasedness(bias, seed);
    if (name == "lipschitz") return lipschitz(bias, seed);
    if (name == "lazy") return lazy(seed);
    if (name == "descent") return descent(seed);
    if (name == "sharpness") return sharpness(seed);
    if (name == "counterexample") return counterexample();
  } catch (const Error& e) {
    return {name, false, fmt::format("error: {}", e.what())};
  }
  throw ArgumentError(fmt::format("unknown suite '{}'", name));
}

}  // namespace rsegm
