// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsegm/trace_io.hpp"

#include <ostream>

#include <fmt/format.h>

namespace rsegm {

using nlohmann::json;

json config_to_json(const SolverConfig& c) {
  json j;
  j["algorithm"] = std::string(to_string(c.algorithm));
  j["oracle"] = std::string(to_string(c.oracle));
  j["p"] = c.p;
  j["tau"] = c.tau;
  j["inner_iters"] = c.inner_iters;
  j["restarts"] = c.restarts;
  j["seed"] = c.seed;
  j["record_every"] = c.record_every;
  j["lazy"] = c.lazy;
  j["lipschitz"] = c.lipschitz;
  j["gap_radius"] = c.gap_radius;
  j["k_multiplier"] = c.k_multiplier;
  j["eps"] = c.eps ? json(*c.eps) : json(nullptr);
  j["initial_distance"] = c.initial_distance ? json(*c.initial_distance) : json(nullptr);
  return j;
}

json record_to_json(const TraceRecord& r) {
  json j;
  j["type"] = "record";
  j["iteration"] = r.iteration;
  j["epoch"] = r.epoch;
  j["epoch_end"] = r.epoch_end;
  j["draws"] = r.draws;
  j["full_evals"] = r.full_evals;
  j["oracle_calls"] = r.oracle_calls;
  j["work_units"] = r.work_units;
  j["distance"] = r.distance ? json(*r.distance) : json(nullptr);
  j["gap"] = r.gap ? json(*r.gap) : json(nullptr);
  j["elapsed"] = r.elapsed;
  return j;
}

void write_trace_jsonl(std::ostream& out, const RunTrace& trace, const json& extra) {
  json header = {{"type", "header"},
                 {"config", config_to_json(trace.config)},
                 {"seed", trace.config.seed}};
  for (const auto& [key, value] : extra.items()) header[key] = value;
  out << header.dump() << "\n";
  for (const TraceRecord& r : trace.records) out << record_to_json(r).dump() << "\n";
  json final_line = {{"type", "final"}, {"solution", trace.final_iterate.vector()}};
  if (!trace.records.empty()) final_line["last_record"] = record_to_json(trace.records.back());
  out << final_line.dump() << "\n";
}

void write_ensemble_csv(std::ostream& out, const TrialEnsemble& ensemble) {
  const json config = config_to_json(ensemble.config);
  for (const auto& [key, value] : config.items()) {
    out << "# " << key << ": " << value.dump() << "\n";
  }
  out << "# base_seed: " << ensemble.base_seed << "\n";
  out << "# trials: " << ensemble.traces.size() << "\n";
  out << "# metric: " << ensemble.metric << "\n";
  out << "checkpoint,median,q10,q90,n_ok,n_failed\n";
  for (const CheckpointSummary& row : ensemble.summary) {
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{},{}\n", row.iteration, row.median,
                       row.q10, row.q90, row.n_ok, row.n_failed);
  }
}

}  // namespace rsegm
