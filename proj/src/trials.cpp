// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsegm/trials.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rsegm/errors.hpp"

namespace rsegm {

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InsufficientDataError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

int TrialEnsemble::n_failed() const {
  return static_cast<int>(std::count_if(failures.begin(), failures.end(),
                                        [](const std::string& f) { return !f.empty(); }));
}

TrialEnsemble run_trials(const SaddleProblem& problem, const SolverConfig& config,
                         const Iterate& z0, int n_trials, std::uint64_t base_seed,
                         int threads) {
  if (n_trials < 1) throw ArgumentError("need at least one trial");
  TrialEnsemble ens;
  ens.config = config;
  ens.config.seed = base_seed;
  ens.base_seed = base_seed;
  const auto count = static_cast<std::size_t>(n_trials);
  ens.seeds.resize(count);
  ens.traces.resize(count);
  ens.failures.resize(count);
  for (std::size_t i = 0; i < count; ++i) ens.seeds[i] = mix_seed(base_seed, i);

  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      SolverConfig c = config;
      c.seed = ens.seeds[i];
      try {
        ens.traces[i] = solve(problem, c, z0).trace;
      } catch (const DivergenceError& e) {
        ens.failures[i] = e.what();
      } catch (...) {
        std::lock_guard<std::mutex> lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
      }
    }
  };
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  bool all_distance = true;
  for (const auto& t : ens.traces) {
    if (t && (t->records.empty() || !t->records.front().distance)) all_distance = false;
  }
  ens.metric = all_distance ? "distance" : "gap";
  ens.summary = summarize(ens, ens.metric);
  return ens;
}

std::vector<CheckpointSummary> summarize(const TrialEnsemble& ensemble,
                                         const std::string& metric) {
  const RunTrace* shape = nullptr;
  for (const auto& t : ensemble.traces) {
    if (t) {
      shape = &*t;
      break;
    }
  }
  std::vector<CheckpointSummary> rows;
  if (!shape) return rows;
  const int failed = ensemble.n_failed();
  for (std::size_t r = 0; r < shape->records.size(); ++r) {
    CheckpointSummary row;
    row.iteration = shape->records[r].iteration;
    row.epoch = shape->records[r].epoch;
    row.epoch_end = shape->records[r].epoch_end;
    row.n_failed = failed;
    std::vector<double> values;
    for (const auto& t : ensemble.traces) {
      if (!t || r >= t->records.size()) continue;
      const auto& v = metric == "distance" ? t->records[r].distance : t->records[r].gap;
      if (v) values.push_back(*v);
    }
    row.n_ok = static_cast<int>(values.size());
    if (!values.empty()) {
      row.median = quantile(values, 0.5);
      row.q10 = quantile(values, 0.1);
      row.q90 = quantile(values, 0.9);
    } else {
      row.median = row.q10 = row.q90 = std::nan("");
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rsegm
