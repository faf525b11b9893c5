// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "rsegm/cli.hpp"
#include "rsegm/diagnostics.hpp"
#include "rsegm/errors.hpp"
#include "rsegm/generators.hpp"
#include "rsegm/problem_io.hpp"
#include "rsegm/solver.hpp"
#include "rsegm/trace_io.hpp"
#include "rsegm/trials.hpp"

namespace rsegm {

namespace {

void setup_logging() {
  auto logger = spdlog::get("saddle");
  if (!logger) logger = spdlog::stderr_color_mt("saddle");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("SADDLE_LOG");
  const std::string tag = level ? level : "info";
  if (tag == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (tag == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::set_level(spdlog::level::info);
  }
}

struct GenerateArgs {
  std::string kind = "bilinear";
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t rank = 0;
  double density = 1.0;
  std::uint64_t seed = 0;
  std::string out = "problem.json";
};

struct SolveArgs {
  std::string problem;
  std::string algo = "rsegm";
  std::string oracle = "importance-rc";
  std::optional<double> p;
  std::optional<double> tau;
  std::optional<std::int64_t> inner_k;
  std::optional<int> restarts_t;
  std::optional<double> eps;
  double k_mult = 1.0;
  int trials = 1;
  std::uint64_t seed = 0;
  bool lazy = false;
  std::int64_t record_every = 0;
  std::string out;
  std::string z0;
  int threads = 1;
  std::vector<std::string> algos;
  std::vector<std::string> oracles;
};

void add_solver_flags(CLI::App* cmd, SolveArgs& a) {
  cmd->add_option("--problem", a.problem, "problem JSON file")->required();
  cmd->add_option("--oracle", a.oracle,
                  "full | uniform-rc | importance-rc | coord-l1 | coord-fro");
  cmd->add_option("--p", a.p, "snapshot probability in (0, 1]");
  cmd->add_option("--tau", a.tau, "step size");
  cmd->add_option("--inner-K", a.inner_k, "inner iterations per epoch");
  cmd->add_option("--restarts-T", a.restarts_t, "number of epochs");
  cmd->add_option("--eps", a.eps, "target distance to optimum");
  cmd->add_option("--k-mult", a.k_mult, "multiplier of the default K schedule");
  cmd->add_option("--seed", a.seed, "random seed");
  cmd->add_flag("--lazy", a.lazy, "use the O(1) coordinate engine");
  cmd->add_option("--record-every", a.record_every, "checkpoint interval in steps");
  cmd->add_option("--z0", a.z0, "JSON file with a starting point (default 0)");
  cmd->add_option("--out", a.out, "output file");
}

Iterate load_start(const SaddleProblem& problem, const std::string& path) {
  if (path.empty()) return problem.zero_iterate();
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  nlohmann::json doc;
  try {
    in >> doc;
    return Iterate(problem.n(), problem.m(), doc.get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("'{}' is not a JSON number array: {}", path, e.what()));
  }
}

SolverOptions to_options(const SolveArgs& a, const std::string& algo,
                         const std::string& oracle) {
  SolverOptions o;
  o.algorithm = parse_algorithm(algo);
  o.oracle = parse_oracle_kind(oracle);
  o.p = a.p;
  o.tau = a.tau;
  o.inner_iters = a.inner_k;
  o.restarts = a.restarts_t;
  o.eps = a.eps;
  o.k_multiplier = a.k_mult;
  o.seed = a.seed;
  o.record_every = a.record_every;
  o.lazy = a.lazy;
  return o;
}

void announce(const SolverConfig& c) {
  const std::string r0 =
      c.initial_distance ? fmt::format("{:.6g}", *c.initial_distance) : "n/a";
  std::cout << fmt::format(
      "config: algo={} oracle={} p={:.6g} tau={:.6g} K={} T={} L={:.6g} "
      "seed={} lazy={} R0={}\n",
      to_string(c.algorithm), to_string(c.oracle), c.p, c.tau, c.inner_iters,
      c.restarts, c.lipschitz, c.seed, c.lazy, r0);
}

std::optional<RateFit> epoch_rate(const RunTrace& trace) {
  std::vector<std::pair<double, double>> pts;
  for (const TraceRecord& r : trace.records) {
    if (!r.epoch_end) continue;
    if (r.distance) {
      pts.emplace_back(r.epoch, *r.distance);
    } else if (r.gap) {
      pts.emplace_back(r.epoch, *r.gap);
    }
  }
  try {
    return fit_linear_rate(pts);
  } catch (const InsufficientDataError&) {
    return std::nullopt;
  }
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt::format("{:.6e}", *v) : "n/a";
}

void summary_line(const RunTrace& trace) {
  const TraceRecord& last = trace.records.back();
  const auto rate = epoch_rate(trace);
  std::cout << fmt::format(
      "result: distance={} gap={} oracle_calls={} work_units={} rate={} "
      "goodness={}\n",
      fmt_opt(last.distance), fmt_opt(last.gap), last.oracle_calls, last.work_units,
      rate ? fmt::format("{:.4f}", rate->rate) : "n/a",
      rate ? fmt::format("{:.4f}", rate->goodness) : "n/a");
}

int cmd_generate(const GenerateArgs& a) {
  SaddleProblem problem = [&] {
    if (a.kind == "bilinear") {
      const std::size_t rank = a.rank == 0 ? std::min(a.m, a.n) : a.rank;
      return generate_bilinear(a.m, a.n, rank, a.density, a.seed);
    }
    if (a.kind == "lp") return generate_lp_known_solution(a.m, a.n, a.seed);
    if (a.kind == "counterexample") return counterexample_lp();
    throw ArgumentError(fmt::format(
        "unknown kind '{}' (expected bilinear, lp or counterexample)", a.kind));
  }();
  save_problem(a.out, problem);
  const MatrixNorms& nm = problem.norms();
  std::cout << fmt::format(
      "wrote {}: kind={} m={} n={} nnz={} frobenius={:.6g} spectral={:.6g} "
      "sigma_min_plus={}\n",
      a.out, to_string(problem.kind()), problem.m(), problem.n(),
      problem.matrix().nnz(), nm.frobenius, nm.spectral,
      nm.sigma_min_plus ? fmt::format("{:.6g}", *nm.sigma_min_plus) : "n/a");
  return kExitOk;
}

int cmd_solve(const SolveArgs& a) {
  const SaddleProblem problem = load_problem(a.problem);
  const Iterate z0 = load_start(problem, a.z0);
  const SolverConfig config =
      resolve_config(problem, to_options(a, a.algo, a.oracle), z0);
  announce(config);
  if (a.trials < 1) throw ArgumentError("--trials must be >= 1");

  if (a.trials == 1) {
    spdlog::info("running {} on {}x{}", to_string(config.algorithm), problem.m(),
                 problem.n());
    const RunResult result = solve(problem, config, z0);
    if (!a.out.empty()) {
      std::ofstream out(a.out);
      if (!out) throw IoError(fmt::format("cannot write '{}'", a.out));
      write_trace_jsonl(out, result.trace, {{"problem", a.problem}});
    }
    summary_line(result.trace);
    return kExitOk;
  }

  spdlog::info("running {} trials", a.trials);
  const TrialEnsemble ens =
      run_trials(problem, config, z0, a.trials, a.seed, a.threads);
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) throw IoError(fmt::format("cannot write '{}'", a.out));
    write_ensemble_csv(out, ens);
  }
  const CheckpointSummary& last = ens.summary.back();
  std::cout << fmt::format(
      "result: trials={} failed={} median_{}={:.6e} q10={:.6e} q90={:.6e}\n",
      a.trials, ens.n_failed(), ens.metric, last.median, last.q10, last.q90);
  return ens.n_failed() > 0 ? kExitFailure : kExitOk;
}

int cmd_bench(const SolveArgs& a) {
  const SaddleProblem problem = load_problem(a.problem);
  const Iterate z0 = load_start(problem, a.z0);
  if (!a.eps) throw ArgumentError("bench needs --eps as the target tolerance");
  const std::vector<std::string> algos =
      a.algos.empty() ? std::vector<std::string>{"rsegm", "det-restart"} : a.algos;
  const std::vector<std::string> oracles =
      a.oracles.empty() ? std::vector<std::string>{a.oracle} : a.oracles;

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw IoError(fmt::format("cannot write '{}'", a.out));
  }
  std::ostream& out = a.out.empty() ? std::cout : file;
  out << "# problem: " << a.problem << "\n# seed: " << a.seed
      << "\n# eps: " << fmt::format("{:.17g}", *a.eps) << "\n";
  out << "algorithm,oracle,oracle_calls_to_tol,work_units_to_tol,wall_time,"
         "fitted_rate,final_metric,status\n";

  for (const std::string& algo : algos) {
    const Algorithm parsed = parse_algorithm(algo);
    const bool deterministic =
        parsed == Algorithm::kDetRestart || parsed == Algorithm::kDetEgm;
    for (const std::string& oracle : oracles) {
      std::string row_oracle = deterministic ? "full" : oracle;
      try {
        SolverOptions o = to_options(a, algo, oracle);
        const SolverConfig config = resolve_config(problem, o, z0);
        announce(config);
        const RunResult result = solve(problem, config, z0);
        std::string calls = "", work = "";
        std::optional<double> final_metric;
        for (const TraceRecord& r : result.trace.records) {
          const auto metric = r.distance ? r.distance : r.gap;
          final_metric = metric;
          if (calls.empty() && metric && *metric <= *a.eps) {
            calls = std::to_string(r.oracle_calls);
            work = std::to_string(r.work_units);
          }
        }
        const auto rate = epoch_rate(result.trace);
        out << fmt::format("{},{},{},{},{:.6f},{},{},{}\n", algo, row_oracle,
                           calls.empty() ? "NA" : calls, work.empty() ? "NA" : work,
                           result.trace.records.back().elapsed,
                           rate ? fmt::format("{:.6g}", rate->rate) : "NA",
                           final_metric ? fmt::format("{:.6e}", *final_metric) : "NA",
                           calls.empty() ? "not-reached" : "ok");
      } catch (const Error& e) {
        spdlog::error("{} / {}: {}", algo, row_oracle, e.what());
        out << fmt::format("{},{},NA,NA,NA,NA,NA,failed\n", algo, row_oracle);
      }
      if (deterministic) break;
    }
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite, double bias, std::uint64_t seed) {
  std::vector<std::string> names = verify_suite_names();
  if (suite != "all") {
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
      throw ArgumentError(fmt::format("unknown suite '{}'", suite));
    }
    names = {suite};
  }
  bool ok = true;
  for (const std::string& name : names) {
    const SuiteResult r = run_verify_suite(name, bias, seed);
    std::cout << fmt::format("{:<15} {}  {}\n", r.name, r.passed ? "PASS" : "FAIL",
                             r.detail);
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Restarted stochastic extragradient solver for bilinear saddle "
               "points and linear programs"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "write a problem instance");
  generate->add_option("--kind", gen.kind, "bilinear | lp | counterexample");
  generate->add_option("--m", gen.m, "rows");
  generate->add_option("--n", gen.n, "columns");
  generate->add_option("--rank", gen.rank, "target rank (bilinear; default min(m, n))");
  generate->add_option("--density", gen.density, "target density (bilinear)");
  generate->add_option("--seed", gen.seed, "random seed");
  generate->add_option("--out", gen.out, "output JSON path");

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run a solver on a problem file");
  add_solver_flags(solve_cmd, solve_args);
  solve_cmd->add_option("--algo", solve_args.algo,
                        "rsegm | segm-norestart | det-restart | det-egm");
  solve_cmd->add_option("--trials", solve_args.trials, "independent runs");
  solve_cmd->add_option("--threads", solve_args.threads, "worker threads for trials");

  SolveArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "compare algorithms and oracles");
  add_solver_flags(bench, bench_args);
  bench->add_option("--algo", bench_args.algos, "algorithms to compare")->delimiter(',');
  bench->add_option("--oracles", bench_args.oracles, "oracles to compare")->delimiter(',');

  std::string suite = "all";
  double bias = 1.0;
  std::uint64_t verify_seed = 2024;
  CLI::App* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("--suite", suite, "suite name or 'all'");
  verify->add_option("--seed", verify_seed, "random seed");
  verify->add_option("--inject-bias", bias, "scale stochastic estimates")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*solve_cmd) return cmd_solve(solve_args);
    if (*bench) return cmd_bench(bench_args);
    if (*verify) return cmd_verify(suite, bias, verify_seed);
  } catch (const DivergenceError& e) {
    spdlog::error("diverged: {}", e.what());
    return kExitFailure;
  } catch (const ArgumentError& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace rsegm
