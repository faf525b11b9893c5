// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include "rsegm/sparse_matrix.hpp"

namespace rsegm {

// Matrix Market coordinate format, ASCII, 1-based indices. The reader accepts
// real/integer/pattern fields with general/symmetric/skew-symmetric storage;
// the writer always emits "coordinate real general" with round-trip precision.
SparseMatrixDual read_matrix_market(std::istream& in);
SparseMatrixDual read_matrix_market(const std::string& path);

void write_matrix_market(std::ostream& out, const SparseMatrixDual& a);
void write_matrix_market(const std::string& path, const SparseMatrixDual& a);

}  // namespace rsegm
