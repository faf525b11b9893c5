// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

#include <json.hpp>

#include "rsegm/solver.hpp"
#include "rsegm/trials.hpp"

namespace rsegm {

nlohmann::json config_to_json(const SolverConfig& config);
nlohmann::json record_to_json(const TraceRecord& record);

// JSONL: a header line {"type": "header", "config": ..., "seed": ...}, one
// {"type": "record", ...} line per checkpoint, and a closing
// {"type": "final", "solution": [...]} line. extra is merged into the header.
void write_trace_jsonl(std::ostream& out, const RunTrace& trace,
                       const nlohmann::json& extra = nlohmann::json::object());

// CSV with "# key: value" config comments followed by
// checkpoint,median,q10,q90,n_ok,n_failed.
void write_ensemble_csv(std::ostream& out, const TrialEnsemble& ensemble);

}  // namespace rsegm
