// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsegm/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "rsegm/errors.hpp"
#include "rsegm/random.hpp"

namespace rsegm {

SparseMatrixDual SparseMatrixDual::from_triplets(
    std::size_t nrows, std::size_t ncols, std::span<const Triplet> triplets) {
  for (const Triplet& t : triplets) {
    if (t.row >= nrows || t.col >= ncols) {
      throw StructuralError(fmt::format(
          "triplet ({}, {}) outside a {}x{} matrix", t.row, t.col, nrows, ncols));
    }
    if (!std::isfinite(t.value)) {
      throw StructuralError(
          fmt::format("non-finite value at ({}, {})", t.row, t.col));
    }
  }

  std::vector<Triplet> sorted(triplets.begin(), triplets.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });

  // Sum duplicates, then drop exact zeros.
  std::vector<Triplet> merged;
  merged.reserve(sorted.size());
  for (const Triplet& t : sorted) {
    if (!merged.empty() && merged.back().row == t.row &&
        merged.back().col == t.col) {
      merged.back().value += t.value;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Triplet& t) { return t.value == 0.0; });

  SparseMatrixDual out;
  out.nrows_ = nrows;
  out.ncols_ = ncols;
  const std::size_t nnz = merged.size();

  out.row_offsets_.assign(nrows + 1, 0);
  out.row_indices_.resize(nnz);
  out.row_values_.resize(nnz);
  out.csr_row_of_.resize(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    ++out.row_offsets_[merged[k].row + 1];
    out.row_indices_[k] = merged[k].col;
    out.row_values_[k] = merged[k].value;
    out.csr_row_of_[k] = merged[k].row;
  }
  std::partial_sum(out.row_offsets_.begin(), out.row_offsets_.end(),
                   out.row_offsets_.begin());

  // Counting sort into columns; rows stay ascending within each column
  // because the source is row-major.
  out.col_offsets_.assign(ncols + 1, 0);
  for (const Triplet& t : merged) ++out.col_offsets_[t.col + 1];
  std::partial_sum(out.col_offsets_.begin(), out.col_offsets_.end(),
                   out.col_offsets_.begin());
  out.col_indices_.resize(nnz);
  out.col_values_.resize(nnz);
  out.csc_col_of_.resize(nnz);
  std::vector<std::size_t> cursor(out.col_offsets_.begin(),
                                  out.col_offsets_.end() - 1);
  for (const Triplet& t : merged) {
    const std::size_t pos = cursor[t.col]++;
    out.col_indices_[pos] = t.row;
    out.col_values_[pos] = t.value;
    out.csc_col_of_[pos] = t.col;
  }
  return out;
}

SparseSlice SparseMatrixDual::row(std::size_t i) const {
  const std::size_t begin = row_offsets_[i];
  const std::size_t len = row_offsets_[i + 1] - begin;
  return {std::span(row_indices_).subspan(begin, len),
          std::span(row_values_).subspan(begin, len)};
}

SparseSlice SparseMatrixDual::col(std::size_t j) const {
  const std::size_t begin = col_offsets_[j];
  const std::size_t len = col_offsets_[j + 1] - begin;
  return {std::span(col_indices_).subspan(begin, len),
          std::span(col_values_).subspan(begin, len)};
}

std::vector<Triplet> SparseMatrixDual::to_triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t k = 0; k < nnz(); ++k) {
    out.push_back({csr_row_of_[k], row_indices_[k], row_values_[k]});
  }
  return out;
}

std::vector<Triplet> SparseMatrixDual::to_triplets_from_columns() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t k = 0; k < nnz(); ++k) {
    out.push_back({col_indices_[k], csc_col_of_[k], col_values_[k]});
  }
  return out;
}

void SparseMatrixDual::multiply(std::span<const double> x,
                                std::span<double> out) const {
  for (std::size_t i = 0; i < nrows_; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      acc += row_values_[k] * x[row_indices_[k]];
    }
    out[i] = acc;
  }
}

void SparseMatrixDual::multiply_transpose(std::span<const double> y,
                                          std::span<double> out) const {
  for (std::size_t j = 0; j < ncols_; ++j) {
    double acc = 0.0;
    for (std::size_t k = col_offsets_[j]; k < col_offsets_[j + 1]; ++k) {
      acc += col_values_[k] * y[col_indices_[k]];
    }
    out[j] = acc;
  }
}

std::vector<double> SparseMatrixDual::to_dense() const {
  std::vector<double> dense(nrows_ * ncols_, 0.0);
  for (std::size_t k = 0; k < nnz(); ++k) {
    dense[csr_row_of_[k] * ncols_ + row_indices_[k]] = row_values_[k];
  }
  return dense;
}

SparseMatrixDual build_matrix(std::size_t nrows, std::size_t ncols,
                              std::span<const Triplet> triplets) {
  return SparseMatrixDual::from_triplets(nrows, ncols, triplets);
}

double MatrixNorms::max_row_l2() const {
  return row_l2.empty() ? 0.0 : *std::max_element(row_l2.begin(), row_l2.end());
}

double MatrixNorms::max_col_l2() const {
  return col_l2.empty() ? 0.0 : *std::max_element(col_l2.begin(), col_l2.end());
}

namespace {

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

// Largest singular value by power iteration on A^T A from a fixed-seed
// start vector, so repeated calls agree bit for bit.
double power_iteration(const SparseMatrixDual& a) {
  const std::size_t n = a.ncols();
  if (a.nnz() == 0 || n == 0) return 0.0;
  RandomStream rng(0x5eed5eedULL);
  std::vector<double> v(n);
  for (double& x : v) x = 1.0 + 0.1 * uniform01(rng);
  std::vector<double> av(a.nrows());
  double estimate = 0.0;
  for (int it = 0; it < kPowerIterationMax; ++it) {
    const double scale = 1.0 / norm2(v);
    for (double& x : v) x *= scale;
    a.multiply(v, av);
    const double next = norm2(av);
    a.multiply_transpose(av, v);
    if (norm2(v) == 0.0) return next;
    if (std::abs(next - estimate) <= kPowerIterationTol * next) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return estimate;
}

}  // namespace

MatrixNorms compute_norms(const SparseMatrixDual& a, bool want_sigma_min_plus) {
  MatrixNorms norms;
  const std::size_t m = a.nrows();
  const std::size_t n = a.ncols();
  norms.row_l2.assign(m, 0.0);
  norms.row_l1.assign(m, 0.0);
  norms.col_l2.assign(n, 0.0);
  norms.col_l1.assign(n, 0.0);

  double sum_sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const SparseSlice r = a.row(i);
    double sq = 0.0;
    double l1 = 0.0;
    for (double v : r.values) {
      sq += v * v;
      l1 += std::abs(v);
    }
    norms.row_l2[i] = std::sqrt(sq);
    norms.row_l1[i] = l1;
    sum_sq += sq;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const SparseSlice c = a.col(j);
    double sq = 0.0;
    double l1 = 0.0;
    for (double v : c.values) {
      sq += v * v;
      l1 += std::abs(v);
    }
    norms.col_l2[j] = std::sqrt(sq);
    norms.col_l1[j] = l1;
  }
  norms.frobenius = std::sqrt(sum_sq);

  const double lower = std::max(norms.max_row_l2(), norms.max_col_l2());
  norms.spectral = std::clamp(power_iteration(a), lower, norms.frobenius);

  if (want_sigma_min_plus) {
    if (std::min(m, n) > kDenseSvdLimit) {
      throw UnsupportedSizeError(fmt::format(
          "sigma_min_plus needs a dense SVD; min(m, n) = {} exceeds {}",
          std::min(m, n), kDenseSvdLimit));
    }
    const std::vector<double> sv = dense_singular_values(a);
    if (!sv.empty() && sv.front() > 0.0) {
      // The SVD is exact where the power iteration is only an estimate.
      norms.spectral = sv.front();
      const double cutoff = kSingularValueCutoff * sv.front();
      double smallest = sv.front();
      for (double s : sv) {
        if (s > cutoff) smallest = std::min(smallest, s);
      }
      norms.sigma_min_plus = smallest;
    }
  }
  return norms;
}

std::vector<double> dense_singular_values(const SparseMatrixDual& a) {
  const std::size_t m = a.nrows();
  const std::size_t n = a.ncols();
  if (m == 0 || n == 0) return {};
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                                static_cast<Eigen::Index>(n));
  for (const Triplet& t : a.to_triplets()) {
    dense(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) =
        t.value;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(dense);
  const Eigen::VectorXd& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

}  // namespace rsegm
