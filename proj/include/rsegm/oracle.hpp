// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "rsegm/problem.hpp"
#include "rsegm/random.hpp"
#include "rsegm/sampler.hpp"

namespace rsegm {

enum class OracleKind { kFull, kUniformRc, kImportanceRc, kCoordL1, kCoordFro };

std::string_view to_string(OracleKind kind);
OracleKind parse_oracle_kind(std::string_view tag);
bool is_coordinate(OracleKind kind);
bool is_row_column(OracleKind kind);

// A realized xi. Row-column kinds: first = row i, second = column j.
// Coordinate kinds: first = CSR position of the x-part entry, second = CSC
// position of the y-part entry. Unused by the full oracle.
struct OracleDraw {
  std::size_t first = 0;
  std::size_t second = 0;

  friend bool operator==(const OracleDraw&, const OracleDraw&) = default;
};

struct OracleSample {
  OracleDraw draw;
  bool dense = false;
  // Sparse estimate as (coordinate, value); coordinates index z = (x, y).
  std::vector<std::pair<std::size_t, double>> entries;
  // Only for the full oracle.
  std::vector<double> dense_values;
};

// Unbiased estimator of the matrix part of F, i.e. F(z) - linear_offset.
// Every stochastic estimate is linear in z and reads exactly two of its
// coordinates: one y-entry (feeding the x-part) and one x-entry (feeding the
// y-part). Immutable; sampling needs a caller-owned stream.
class StochasticOracle {
 public:
  StochasticOracle(OracleKind kind, std::shared_ptr<const SparseMatrixDual> a,
                   std::vector<double> linear_offset);
  // Reuses precomputed norms of a.
  StochasticOracle(OracleKind kind, std::shared_ptr<const SparseMatrixDual> a,
                   std::vector<double> linear_offset, const MatrixNorms& norms);

  OracleKind kind() const { return kind_; }
  const SparseMatrixDual& matrix() const { return *matrix_; }
  std::size_t n() const { return matrix_->ncols(); }
  std::size_t m() const { return matrix_->nrows(); }
  std::size_t dim() const { return n() + m(); }
  double lipschitz_bound() const { return lipschitz_; }
  std::span<const double> linear_offset() const { return offset_; }

  // Row-column kinds: row then column. Coordinate kinds: x-part entry then
  // y-part entry. The full oracle consumes nothing.
  OracleDraw draw(RandomStream& rng) const;
  double probability(const OracleDraw& d) const;

  // Coordinates of z read by the estimate: (n + i, j) for a draw that uses
  // row i on the x side and column j on the y side.
  std::pair<std::size_t, std::size_t> source_coordinates(const OracleDraw& d) const;

  // Calls fn(coordinate, value) for each entry of F_xi(z), where y_value and
  // x_value are the two coordinates named by source_coordinates. Not for the
  // full oracle.
  template <class Fn>
  void visit(const OracleDraw& d, double y_value, double x_value, Fn&& fn) const;

  // out += scale * (F_xi(zh) - F_xi(w)). For the full oracle the draw is
  // ignored and the exact matrix part is used.
  void add_difference(const OracleDraw& d, std::span<const double> zh,
                      std::span<const double> w, double scale,
                      std::span<double> out) const;

  // Work units of one estimate: nnz(row) + nnz(col) for row-column kinds,
  // 2 for coordinate kinds, nnz(A) for the full oracle.
  std::size_t draw_cost(const OracleDraw& d) const;
  // Index draws per estimate (0 for the full oracle).
  int draws_per_sample() const { return kind_ == OracleKind::kFull ? 0 : 2; }

  // Calls fn(draw, probability) for every outcome of positive probability.
  // Throws UnsupportedSizeError beyond kMaxExhaustiveOutcomes.
  template <class Fn>
  void for_each_outcome(Fn&& fn) const;
  std::uint64_t outcome_count() const;

  // Test hook: multiplies every stochastic estimate by factor, breaking
  // unbiasedness on purpose.
  StochasticOracle with_bias(double factor) const;
  double bias() const { return bias_; }

  const DiscreteSampler& first_sampler() const { return first_; }
  const DiscreteSampler& second_sampler() const { return second_; }

 private:
  // Scalars c_x, c_y such that the x-part value is c_x * y_value and the
  // y-part value is c_y * x_value (coordinate kinds only).
  std::pair<double, double> coordinate_coefficients(const OracleDraw& d) const;

  OracleKind kind_;
  std::shared_ptr<const SparseMatrixDual> matrix_;
  std::vector<double> offset_;
  DiscreteSampler first_;
  DiscreteSampler second_;
  double lipschitz_ = 0.0;
  double bias_ = 1.0;
};

inline constexpr std::uint64_t kMaxExhaustiveOutcomes = 1'000'000;

// Offset (c, b) for bilinear problems and zero for LPs.
StochasticOracle make_oracle(OracleKind kind, const SaddleProblem& problem);

// Closed-form Lipschitz constant of each kind for the given matrix.
double lipschitz_bound(OracleKind kind, const SparseMatrixDual& a,
                       const MatrixNorms& norms);

OracleSample sample_gradient(const StochasticOracle& oracle, const Iterate& z,
                             RandomStream& rng);

// Sum over outcomes of P(xi) F_xi(z), plus the linear offset.
std::vector<double> exhaustive_expectation(const StochasticOracle& oracle,
                                           const Iterate& z);

// Exact E|F_xi(u) - F_xi(v)|^2 for one pair.
double exhaustive_second_moment(const StochasticOracle& oracle,
                                std::span<const double> u,
                                std::span<const double> v);

// max over trials Gaussian pairs (u, v) of E|F_xi(u)-F_xi(v)|^2 / |u-v|^2.
double empirical_lipschitz_check(const StochasticOracle& oracle, int trials,
                                 RandomStream& rng);

// ---------------------------------------------------------------------------

template <class Fn>
void StochasticOracle::visit(const OracleDraw& d, double y_value, double x_value,
                             Fn&& fn) const {
  const std::size_t n = matrix_->ncols();
  if (is_row_column(kind_)) {
    const double sx = bias_ * y_value / first_.probability(d.first);
    const double sy = -bias_ * x_value / second_.probability(d.second);
    const SparseSlice row = matrix_->row(d.first);
    for (std::size_t k = 0; k < row.size(); ++k) {
      fn(row.indices[k], sx * row.values[k]);
    }
    const SparseSlice col = matrix_->col(d.second);
    for (std::size_t k = 0; k < col.size(); ++k) {
      fn(n + col.indices[k], sy * col.values[k]);
    }
    return;
  }
  const auto [cx, cy] = coordinate_coefficients(d);
  fn(matrix_->csr_col_of(d.first), cx * y_value);
  fn(n + matrix_->csc_row_of(d.second), cy * x_value);
}

template <class Fn>
void StochasticOracle::for_each_outcome(Fn&& fn) const {
  (void)outcome_count();  // size guard
  if (kind_ == OracleKind::kFull) {
    fn(OracleDraw{}, 1.0);
    return;
  }
  for (std::size_t a : first_.support()) {
    const double pa = first_.probability(a);
    for (std::size_t b : second_.support()) {
      fn(OracleDraw{a, b}, pa * second_.probability(b));
    }
  }
}

}  // namespace rsegm
