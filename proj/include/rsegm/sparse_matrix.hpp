// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rsegm {

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

// A sparse view of one row or one column: sorted indices and their values.
struct SparseSlice {
  std::span<const std::size_t> indices;
  std::span<const double> values;

  std::size_t size() const { return indices.size(); }
};

// One matrix stored simultaneously in compressed row-major (CSR) and
// compressed column-major (CSC) form. Both forms hold identical
// (row, col, value) triples, sorted within each row/column, with no explicit
// zeros and no duplicates. Immutable after construction.
class SparseMatrixDual {
 public:
  SparseMatrixDual() = default;

  // Duplicates are summed and exact zeros dropped. Throws StructuralError on
  // an out-of-range index.
  static SparseMatrixDual from_triplets(std::size_t nrows, std::size_t ncols,
                                        std::span<const Triplet> triplets);

  std::size_t nrows() const { return nrows_; }
  std::size_t ncols() const { return ncols_; }
  std::size_t nnz() const { return row_values_.size(); }

  SparseSlice row(std::size_t i) const;
  SparseSlice col(std::size_t j) const;

  // Entry-level access by position in either form. Positions are the
  // sampling units of the coordinate oracles.
  std::size_t csr_row_of(std::size_t pos) const { return csr_row_of_[pos]; }
  std::size_t csr_col_of(std::size_t pos) const { return row_indices_[pos]; }
  double csr_value(std::size_t pos) const { return row_values_[pos]; }
  std::size_t csc_row_of(std::size_t pos) const { return col_indices_[pos]; }
  std::size_t csc_col_of(std::size_t pos) const { return csc_col_of_[pos]; }
  double csc_value(std::size_t pos) const { return col_values_[pos]; }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::size_t> col_offsets() const { return col_offsets_; }
  std::span<const double> csr_values() const { return row_values_; }
  std::span<const double> csc_values() const { return col_values_; }

  // Row-major triplet list (the canonical order).
  std::vector<Triplet> to_triplets() const;
  // Column-major triplet list extracted from the CSC form only.
  std::vector<Triplet> to_triplets_from_columns() const;

  // out = A x
  void multiply(std::span<const double> x, std::span<double> out) const;
  // out = A^T y
  void multiply_transpose(std::span<const double> y,
                          std::span<double> out) const;

  // Dense row-major copy, for desk-scale diagnostics.
  std::vector<double> to_dense() const;

 private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;

  std::vector<std::size_t> row_offsets_ = {0};
  std::vector<std::size_t> row_indices_;
  std::vector<double> row_values_;
  std::vector<std::size_t> csr_row_of_;

  std::vector<std::size_t> col_offsets_ = {0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> col_values_;
  std::vector<std::size_t> csc_col_of_;
};

// Convenience wrapper matching the triplet-list construction contract.
SparseMatrixDual build_matrix(std::size_t nrows, std::size_t ncols,
                              std::span<const Triplet> triplets);

struct MatrixNorms {
  double frobenius = 0.0;
  // Power-iteration estimate, clamped into the interval the norm chain
  // max{|A_i.|, |A_.j|} <= |A|_2 <= |A|_F guarantees.
  double spectral = 0.0;
  std::vector<double> row_l2;
  std::vector<double> col_l2;
  std::vector<double> row_l1;
  std::vector<double> col_l1;
  std::optional<double> sigma_min_plus;

  double max_row_l2() const;
  double max_col_l2() const;
};

inline constexpr std::size_t kDenseSvdLimit = 2000;
inline constexpr double kSingularValueCutoff = 1e-10;
inline constexpr int kPowerIterationMax = 200;
inline constexpr double kPowerIterationTol = 1e-8;

// Throws UnsupportedSizeError when sigma_min_plus is requested and
// min(m, n) exceeds kDenseSvdLimit.
MatrixNorms compute_norms(const SparseMatrixDual& a, bool want_sigma_min_plus);

// Singular values of the dense copy of `a`, descending. Desk scale only.
std::vector<double> dense_singular_values(const SparseMatrixDual& a);

}  // namespace rsegm
