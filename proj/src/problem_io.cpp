// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsegm/problem_io.hpp"

#include <filesystem>
#include <fstream>

#include <fmt/format.h>

#include "rsegm/errors.hpp"
#include "rsegm/matrix_market.hpp"

namespace rsegm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> read_vector(const json& doc, const char* key, std::size_t size) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw IoError(fmt::format("problem file lacks array '{}'", key));
  }
  std::vector<double> v;
  try {
    v = doc[key].get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw IoError(fmt::format("field '{}': {}", key, e.what()));
  }
  if (v.size() != size) {
    throw StructuralError(fmt::format("field '{}' has length {}, expected {}", key,
                                      v.size(), size));
  }
  return v;
}

}  // namespace

SaddleProblem problem_from_json(const json& doc, const std::string& base_dir) {
  try {
    const ProblemKind kind = parse_problem_kind(doc.at("kind").get<std::string>());
    const auto m = doc.at("m").get<std::size_t>();
    const auto n = doc.at("n").get<std::size_t>();

    const json& mat = doc.at("matrix");
    SparseMatrixDual a;
    if (mat.is_string()) {
      fs::path p(mat.get<std::string>());
      if (p.is_relative()) p = fs::path(base_dir) / p;
      a = read_matrix_market(p.string());
    } else {
      std::vector<Triplet> triplets;
      for (const json& t : mat.at("triplets")) {
        if (!t.is_array() || t.size() != 3) throw IoError("triplet must be [i, j, v]");
        triplets.push_back({t[0].get<std::size_t>(), t[1].get<std::size_t>(),
                            t[2].get<double>()});
      }
      a = SparseMatrixDual::from_triplets(m, n, triplets);
    }
    if (a.nrows() != m || a.ncols() != n) {
      throw StructuralError(fmt::format("matrix is {}x{}, problem declares {}x{}",
                                        a.nrows(), a.ncols(), m, n));
    }
    auto shared = std::make_shared<const SparseMatrixDual>(std::move(a));
    std::vector<double> b = read_vector(doc, "b", m);
    std::vector<double> c = read_vector(doc, "c", n);

    if (kind == ProblemKind::kBilinear) {
      SaddleProblem prob = SaddleProblem::bilinear(shared, std::move(b), std::move(c));
      if (doc.contains("reference_solution")) {
        prob = prob.with_reference_solution(
            Iterate(n, m, read_vector(doc, "reference_solution", n + m)));
      }
      return prob;
    }
    std::optional<Iterate> optimum;
    if (doc.contains("known_optimum")) {
      optimum = Iterate(n, m, read_vector(doc, "known_optimum", n + m));
    }
    const bool flag = doc.value("dual_nonneg_flag", false);
    SaddleProblem prob = SaddleProblem::lp(shared, std::move(b), std::move(c),
                                           std::move(optimum), flag);
    if (doc.contains("hoffman_constant")) {
      prob = prob.with_hoffman_constant(doc["hoffman_constant"].get<double>());
    }
    return prob;
  } catch (const json::exception& e) {
    throw IoError(fmt::format("malformed problem description: {}", e.what()));
  }
}

SaddleProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw IoError(fmt::format("'{}' is not valid JSON: {}", path, e.what()));
  }
  return problem_from_json(doc, fs::path(path).parent_path().string());
}

json problem_to_json(const SaddleProblem& problem, const std::string& matrix_file) {
  json doc;
  doc["kind"] = std::string(to_string(problem.kind()));
  doc["m"] = problem.m();
  doc["n"] = problem.n();
  if (matrix_file.empty()) {
    json triplets = json::array();
    for (const Triplet& t : problem.matrix().to_triplets()) {
      triplets.push_back({t.row, t.col, t.value});
    }
    doc["matrix"] = {{"triplets", triplets}};
  } else {
    doc["matrix"] = matrix_file;
  }
  doc["b"] = std::vector<double>(problem.b().begin(), problem.b().end());
  doc["c"] = std::vector<double>(problem.c().begin(), problem.c().end());
  if (problem.known_optimum()) doc["known_optimum"] = problem.known_optimum()->vector();
  if (!problem.is_bilinear()) doc["dual_nonneg_flag"] = problem.dual_nonnegative();
  if (problem.reference_solution()) {
    doc["reference_solution"] = problem.reference_solution()->vector();
  }
  if (problem.hoffman_constant()) doc["hoffman_constant"] = *problem.hoffman_constant();
  return doc;
}

void save_problem(const std::string& path, const SaddleProblem& problem) {
  const fs::path json_path(path);
  fs::path mtx = json_path;
  mtx.replace_extension(".mtx");
  write_matrix_market(mtx.string(), problem.matrix());
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path));
  out << problem_to_json(problem, mtx.filename().string()).dump(2) << "\n";
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

}  // namespace rsegm
