// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsegm/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "rsegm/errors.hpp"

namespace rsegm {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

SparseMatrixDual read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty Matrix Market stream");

  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") {
    throw IoError("missing %%MatrixMarket banner");
  }
  object = lowercase(object);
  format = lowercase(format);
  field = lowercase(field);
  symmetry = lowercase(symmetry);
  if (object != "matrix" || format != "coordinate") {
    throw IoError(fmt::format("unsupported Matrix Market layout '{} {}'",
                              object, format));
  }
  const bool pattern = field == "pattern";
  if (!pattern && field != "real" && field != "integer" && field != "double") {
    throw IoError(fmt::format("unsupported Matrix Market field '{}'", field));
  }
  const bool symmetric = symmetry == "symmetric";
  const bool skew = symmetry == "skew-symmetric";
  if (!symmetric && !skew && symmetry != "general") {
    throw IoError(fmt::format("unsupported Matrix Market symmetry '{}'", symmetry));
  }

  // Skip comments and blank lines up to the size line.
  do {
    if (!std::getline(in, line)) throw IoError("missing Matrix Market size line");
  } while (line.empty() || line[0] == '%' ||
           line.find_first_not_of(" \t\r") == std::string::npos);

  std::size_t nrows = 0, ncols = 0, entries = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> nrows >> ncols >> entries)) {
      throw IoError(fmt::format("malformed Matrix Market size line '{}'", line));
    }
  }

  std::vector<Triplet> triplets;
  triplets.reserve(symmetric || skew ? 2 * entries : entries);
  std::size_t read = 0;
  while (read < entries && std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream entry(line);
    std::size_t i = 0, j = 0;
    double v = 1.0;
    if (!(entry >> i >> j) || (!pattern && !(entry >> v))) {
      throw IoError(fmt::format("malformed Matrix Market entry '{}'", line));
    }
    if (i == 0 || j == 0 || i > nrows || j > ncols) {
      throw StructuralError(fmt::format(
          "Matrix Market entry ({}, {}) outside a {}x{} matrix", i, j, nrows, ncols));
    }
    triplets.push_back({i - 1, j - 1, v});
    if ((symmetric || skew) && i != j) {
      triplets.push_back({j - 1, i - 1, skew ? -v : v});
    }
    ++read;
  }
  if (read != entries) {
    throw IoError(fmt::format("Matrix Market stream ended after {} of {} entries",
                              read, entries));
  }
  return SparseMatrixDual::from_triplets(nrows, ncols, triplets);
}

SparseMatrixDual read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseMatrixDual& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << fmt::format("{} {} {}\n", a.nrows(), a.ncols(), a.nnz());
  for (const Triplet& t : a.to_triplets()) {
    out << fmt::format("{} {} {:.17g}\n", t.row + 1, t.col + 1, t.value);
  }
}

void write_matrix_market(const std::string& path, const SparseMatrixDual& a) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path));
  write_matrix_market(out, a);
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

}  // namespace rsegm
