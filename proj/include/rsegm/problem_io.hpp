// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <json.hpp>

#include "rsegm/problem.hpp"

namespace rsegm {

// JSON problem description:
//   {"kind": "bilinear" | "lp", "m": M, "n": N,
//    "matrix": "a.mtx" | {"triplets": [[i, j, v], ...]},   (0-based inline)
//    "b": [...], "c": [...],
//    "known_optimum": [...], "dual_nonneg_flag": bool,
//    "reference_solution": [...]}                           (optional)
// Matrix paths are relative to the JSON file's directory.
SaddleProblem problem_from_json(const nlohmann::json& doc,
                                const std::string& base_dir = ".");
SaddleProblem load_problem(const std::string& path);

// With an empty matrix_file the matrix is inlined as triplets.
nlohmann::json problem_to_json(const SaddleProblem& problem,
                               const std::string& matrix_file = "");

// Writes path and, next to it, <stem>.mtx holding the matrix.
void save_problem(const std::string& path, const SaddleProblem& problem);

}  // namespace rsegm
