// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsegm/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "rsegm/errors.hpp"

namespace rsegm {

std::string_view to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::kFull: return "full";
    case OracleKind::kUniformRc: return "uniform-rc";
    case OracleKind::kImportanceRc: return "importance-rc";
    case OracleKind::kCoordL1: return "coord-l1";
    case OracleKind::kCoordFro: return "coord-fro";
  }
  return "?";
}

OracleKind parse_oracle_kind(std::string_view tag) {
  for (OracleKind k : {OracleKind::kFull, OracleKind::kUniformRc,
                       OracleKind::kImportanceRc, OracleKind::kCoordL1,
                       OracleKind::kCoordFro}) {
    if (tag == to_string(k)) return k;
  }
  throw ArgumentError(fmt::format(
      "unknown oracle '{}' (expected full, uniform-rc, importance-rc, "
      "coord-l1 or coord-fro)", tag));
}

bool is_coordinate(OracleKind kind) {
  return kind == OracleKind::kCoordL1 || kind == OracleKind::kCoordFro;
}

bool is_row_column(OracleKind kind) {
  return kind == OracleKind::kUniformRc || kind == OracleKind::kImportanceRc;
}

double lipschitz_bound(OracleKind kind, const SparseMatrixDual& a,
                       const MatrixNorms& norms) {
  switch (kind) {
    case OracleKind::kFull:
      return norms.spectral;
    case OracleKind::kUniformRc: {
      const double r = norms.max_row_l2();
      const double c = norms.max_col_l2();
      return std::sqrt(std::max(static_cast<double>(a.nrows()) * r * r,
                                static_cast<double>(a.ncols()) * c * c));
    }
    case OracleKind::kImportanceRc:
      return norms.frobenius;
    case OracleKind::kCoordFro: {
      // E|F_xi(z)|^2 = |A|_F^2 (sum_i nnz(A_i.) y_i^2 + sum_j nnz(A_.j) x_j^2),
      // so |A|_F alone is only enough when no row or column repeats.
      std::size_t widest = 1;
      for (std::size_t i = 0; i < a.nrows(); ++i) widest = std::max(widest, a.row(i).size());
      for (std::size_t j = 0; j < a.ncols(); ++j) widest = std::max(widest, a.col(j).size());
      return norms.frobenius * std::sqrt(static_cast<double>(widest));
    }
    case OracleKind::kCoordL1: {
      double rows = 0.0;
      double cols = 0.0;
      for (double v : norms.row_l1) rows += v * v;
      for (double v : norms.col_l1) cols += v * v;
      return std::max(std::sqrt(rows), std::sqrt(cols));
    }
  }
  return 0.0;
}

StochasticOracle::StochasticOracle(OracleKind kind,
                                   std::shared_ptr<const SparseMatrixDual> a,
                                   std::vector<double> linear_offset)
    : StochasticOracle(kind, a, std::move(linear_offset),
                       compute_norms(*a, /*want_sigma_min_plus=*/false)) {}

StochasticOracle::StochasticOracle(OracleKind kind,
                                   std::shared_ptr<const SparseMatrixDual> a,
                                   std::vector<double> linear_offset,
                                   const MatrixNorms& norms)
    : kind_(kind), matrix_(std::move(a)), offset_(std::move(linear_offset)) {
  const SparseMatrixDual& mat = *matrix_;
  if (offset_.size() != mat.nrows() + mat.ncols()) {
    throw StructuralError("linear offset does not match the matrix shape");
  }
  lipschitz_ = rsegm::lipschitz_bound(kind_, mat, norms);

  std::vector<double> w1;
  std::vector<double> w2;
  switch (kind_) {
    case OracleKind::kFull:
      return;
    case OracleKind::kUniformRc:
      w1.assign(mat.nrows(), 1.0);
      w2.assign(mat.ncols(), 1.0);
      break;
    case OracleKind::kImportanceRc:
      w1.resize(mat.nrows());
      w2.resize(mat.ncols());
      for (std::size_t i = 0; i < w1.size(); ++i) w1[i] = norms.row_l2[i] * norms.row_l2[i];
      for (std::size_t j = 0; j < w2.size(); ++j) w2[j] = norms.col_l2[j] * norms.col_l2[j];
      break;
    case OracleKind::kCoordL1:
      // p_ij proportional to |A_i.|_1 |A_ij|, q_ij to |A_.j|_1 |A_ij|.
      w1.resize(mat.nnz());
      w2.resize(mat.nnz());
      for (std::size_t pos = 0; pos < mat.nnz(); ++pos) {
        w1[pos] = norms.row_l1[mat.csr_row_of(pos)] * std::abs(mat.csr_value(pos));
        w2[pos] = norms.col_l1[mat.csc_col_of(pos)] * std::abs(mat.csc_value(pos));
      }
      break;
    case OracleKind::kCoordFro:
      w1.resize(mat.nnz());
      w2.resize(mat.nnz());
      for (std::size_t pos = 0; pos < mat.nnz(); ++pos) {
        w1[pos] = mat.csr_value(pos) * mat.csr_value(pos);
        w2[pos] = mat.csc_value(pos) * mat.csc_value(pos);
      }
      break;
  }
  first_ = DiscreteSampler(w1);
  second_ = DiscreteSampler(w2);
}

StochasticOracle make_oracle(OracleKind kind, const SaddleProblem& problem) {
  return StochasticOracle(kind, problem.matrix_ptr(), linear_offset(problem),
                          problem.norms());
}

OracleDraw StochasticOracle::draw(RandomStream& rng) const {
  if (kind_ == OracleKind::kFull) return {};
  OracleDraw d;
  d.first = first_.draw(rng);
  d.second = second_.draw(rng);
  return d;
}

double StochasticOracle::probability(const OracleDraw& d) const {
  if (kind_ == OracleKind::kFull) return 1.0;
  return first_.probability(d.first) * second_.probability(d.second);
}

std::pair<std::size_t, std::size_t> StochasticOracle::source_coordinates(
    const OracleDraw& d) const {
  const std::size_t n = matrix_->ncols();
  if (is_row_column(kind_)) return {n + d.first, d.second};
  return {n + matrix_->csr_row_of(d.first), matrix_->csc_col_of(d.second)};
}

std::pair<double, double> StochasticOracle::coordinate_coefficients(
    const OracleDraw& d) const {
  return {bias_ * matrix_->csr_value(d.first) / first_.probability(d.first),
          -bias_ * matrix_->csc_value(d.second) / second_.probability(d.second)};
}

void StochasticOracle::add_difference(const OracleDraw& d,
                                      std::span<const double> zh,
                                      std::span<const double> w, double scale,
                                      std::span<double> out) const {
  if (kind_ == OracleKind::kFull) {
    const std::size_t n = matrix_->ncols();
    std::vector<double> diff(zh.size());
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = zh[k] - w[k];
    std::vector<double> fx(n), fy(matrix_->nrows());
    matrix_->multiply_transpose(std::span<const double>(diff).subspan(n), fx);
    matrix_->multiply(std::span<const double>(diff).first(n), fy);
    for (std::size_t j = 0; j < n; ++j) out[j] += scale * fx[j];
    for (std::size_t i = 0; i < fy.size(); ++i) out[n + i] -= scale * fy[i];
    return;
  }
  const auto [ys, xs] = source_coordinates(d);
  visit(d, zh[ys] - w[ys], zh[xs] - w[xs],
        [&](std::size_t k, double v) { out[k] += scale * v; });
}

std::size_t StochasticOracle::draw_cost(const OracleDraw& d) const {
  switch (kind_) {
    case OracleKind::kFull:
      return matrix_->nnz();
    case OracleKind::kUniformRc:
    case OracleKind::kImportanceRc:
      return matrix_->row(d.first).size() + matrix_->col(d.second).size();
    default:
      return 2;
  }
}

std::uint64_t StochasticOracle::outcome_count() const {
  if (kind_ == OracleKind::kFull) return 1;
  const std::uint64_t count =
      static_cast<std::uint64_t>(first_.support_size()) * second_.support_size();
  if (count > kMaxExhaustiveOutcomes) {
    throw UnsupportedSizeError(fmt::format(
        "{} outcome pairs exceed the exhaustive limit of {}", count,
        kMaxExhaustiveOutcomes));
  }
  return count;
}

StochasticOracle StochasticOracle::with_bias(double factor) const {
  StochasticOracle copy = *this;
  copy.bias_ = factor;
  return copy;
}

OracleSample sample_gradient(const StochasticOracle& oracle, const Iterate& z,
                             RandomStream& rng) {
  if (z.size() != oracle.dim()) {
    throw StructuralError("iterate does not match the oracle dimension");
  }
  OracleSample sample;
  sample.draw = oracle.draw(rng);
  if (oracle.kind() == OracleKind::kFull) {
    sample.dense = true;
    sample.dense_values.assign(oracle.dim(), 0.0);
    std::vector<double> zero(oracle.dim(), 0.0);
    oracle.add_difference(sample.draw, z.values(), zero, 1.0, sample.dense_values);
    return sample;
  }
  const auto [ys, xs] = oracle.source_coordinates(sample.draw);
  oracle.visit(sample.draw, z[ys], z[xs], [&](std::size_t k, double v) {
    sample.entries.emplace_back(k, v);
  });
  return sample;
}

std::vector<double> exhaustive_expectation(const StochasticOracle& oracle,
                                           const Iterate& z) {
  if (z.size() != oracle.dim()) {
    throw StructuralError("iterate does not match the oracle dimension");
  }
  std::vector<double> out(oracle.dim(), 0.0);
  const std::vector<double> zero(oracle.dim(), 0.0);
  oracle.for_each_outcome([&](const OracleDraw& d, double prob) {
    oracle.add_difference(d, z.values(), zero, prob, out);
  });
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += oracle.linear_offset()[k];
  return out;
}

double exhaustive_second_moment(const StochasticOracle& oracle,
                                std::span<const double> u,
                                std::span<const double> v) {
  double total = 0.0;
  std::vector<double> est(oracle.dim());
  oracle.for_each_outcome([&](const OracleDraw& d, double prob) {
    std::fill(est.begin(), est.end(), 0.0);
    oracle.add_difference(d, u, v, 1.0, est);
    double sq = 0.0;
    for (double e : est) sq += e * e;
    total += prob * sq;
  });
  return total;
}

double empirical_lipschitz_check(const StochasticOracle& oracle, int trials,
                                 RandomStream& rng) {
  double worst = 0.0;
  std::vector<double> u(oracle.dim()), v(oracle.dim());
  for (int t = 0; t < trials; ++t) {
    for (double& e : u) e = standard_normal(rng);
    for (double& e : v) e = standard_normal(rng);
    const double d = distance(u, v);
    if (d == 0.0) continue;
    worst = std::max(worst, exhaustive_second_moment(oracle, u, v) / (d * d));
  }
  return worst;
}

}  // namespace rsegm
