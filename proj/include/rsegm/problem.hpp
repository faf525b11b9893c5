// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rsegm/sparse_matrix.hpp"

namespace rsegm {

// Primal-dual point z = (x, y), stored contiguously with x first.
class Iterate {
 public:
  Iterate() = default;
  Iterate(std::size_t n, std::size_t m) : n_(n), data_(n + m, 0.0) {}
  Iterate(std::size_t n, std::size_t m, std::vector<double> z);

  std::size_t n() const { return n_; }
  std::size_t m() const { return data_.size() - n_; }
  std::size_t size() const { return data_.size(); }

  std::span<double> x() { return std::span(data_).first(n_); }
  std::span<const double> x() const { return std::span(data_).first(n_); }
  std::span<double> y() { return std::span(data_).subspan(n_); }
  std::span<const double> y() const { return std::span(data_).subspan(n_); }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& vector() const { return data_; }

  double& operator[](std::size_t k) { return data_[k]; }
  double operator[](std::size_t k) const { return data_[k]; }

  bool all_finite() const;

  friend bool operator==(const Iterate&, const Iterate&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

enum class ProblemKind { kBilinear, kLp };

std::string_view to_string(ProblemKind kind);
ProblemKind parse_problem_kind(std::string_view tag);

// min_x max_y  y^T A x + c^T x - b^T y, with either no constraints
// (bilinear) or x >= 0 (standard-form LP). An LP may additionally carry the
// dual-nonnegativity flag (y >= 0), which models inequality-constrained
// primal problems without converting them. Immutable after construction.
class SaddleProblem {
 public:
  static SaddleProblem bilinear(std::shared_ptr<const SparseMatrixDual> a,
                                std::vector<double> b, std::vector<double> c);
  static SaddleProblem lp(std::shared_ptr<const SparseMatrixDual> a,
                          std::vector<double> b, std::vector<double> c,
                          std::optional<Iterate> known_optimum = std::nullopt,
                          bool dual_nonnegative = false);

  ProblemKind kind() const { return kind_; }
  bool is_bilinear() const { return kind_ == ProblemKind::kBilinear; }
  std::size_t n() const { return matrix_->ncols(); }
  std::size_t m() const { return matrix_->nrows(); }
  std::size_t dim() const { return n() + m(); }

  const SparseMatrixDual& matrix() const { return *matrix_; }
  const std::shared_ptr<const SparseMatrixDual>& matrix_ptr() const {
    return matrix_;
  }
  std::span<const double> b() const { return b_; }
  std::span<const double> c() const { return c_; }
  const MatrixNorms& norms() const { return norms_; }

  bool dual_nonnegative() const { return dual_nonnegative_; }

  // LP: the certified unique optimum. Bilinear: unused.
  const std::optional<Iterate>& known_optimum() const { return known_optimum_; }
  // Bilinear: one point of the (affine) optimal set when the generator knows
  // it. Distances never rely on it.
  const std::optional<Iterate>& reference_solution() const {
    return reference_solution_;
  }
  // LP metadata only; never computed.
  const std::optional<double>& hoffman_constant() const {
    return hoffman_constant_;
  }

  SaddleProblem with_reference_solution(Iterate z) const;
  SaddleProblem with_hoffman_constant(double h) const;

  Iterate zero_iterate() const { return Iterate(n(), m()); }

 private:
  SaddleProblem() = default;

  ProblemKind kind_ = ProblemKind::kBilinear;
  std::shared_ptr<const SparseMatrixDual> matrix_;
  std::vector<double> b_;
  std::vector<double> c_;
  MatrixNorms norms_;
  bool dual_nonnegative_ = false;
  std::optional<Iterate> known_optimum_;
  std::optional<Iterate> reference_solution_;
  std::optional<double> hoffman_constant_;
};

// F(z) = (A^T y + c, -A x + b) for bilinear problems, (A^T y, -A x) for LPs
// (whose linear terms live in the prox).
std::vector<double> full_operator(const SaddleProblem& problem, const Iterate& z);
void full_operator_into(const SaddleProblem& problem, std::span<const double> z,
                        std::span<double> out);

// The deterministic part of F that does not depend on z: (c, b) for bilinear
// problems, zero for LPs.
std::vector<double> linear_offset(const SaddleProblem& problem);

// prox_{tau g}(v): identity for bilinear; (max(v_x - tau c, 0), v_y - tau b)
// for LPs, with y clamped at zero when the dual-nonnegativity flag is set.
Iterate prox_step(const SaddleProblem& problem, const Iterate& v, double tau);
void prox_in_place(const SaddleProblem& problem, std::span<double> v, double tau);

// Coefficients g with L(x, y') - L(x', y) = g^T (z' - z):
// g = (-(A^T y + c), A x - b).
std::vector<double> gap_linear_coefficients(const SaddleProblem& problem,
                                            const Iterate& z);

// dist(z, Z*). Bilinear: minimum-norm least-squares corrections of
// A x = b and A^T y = -c; throws InfeasibleError when either system is
// inconsistent. LP: |z - known_optimum|; throws UnsupportedError without one.
double distance_to_optimum(const SaddleProblem& problem, const Iterate& z);

// Nearest point of Z* for bilinear problems.
Iterate project_to_optimal_set(const SaddleProblem& problem, const Iterate& z);

inline constexpr double kLeastSquaresTol = 1e-10;
inline constexpr double kInfeasibleResidual = 1e-8;

struct LeastSquaresResult {
  std::vector<double> solution;  // minimum-norm minimizer of |B d - rhs|
  double residual = 0.0;         // |B d - rhs|
  int iterations = 0;
};

// CGLS from zero on B = A (transpose = false) or B = A^T, which converges to
// the minimum-norm least-squares solution.
LeastSquaresResult min_norm_least_squares(const SparseMatrixDual& a,
                                          bool transpose,
                                          std::span<const double> rhs,
                                          double tol = kLeastSquaresTol);

double norm2(std::span<const double> v);
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace rsegm
