// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsegm/problem.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "rsegm/errors.hpp"

namespace rsegm {

Iterate::Iterate(std::size_t n, std::size_t m, std::vector<double> z)
    : n_(n), data_(std::move(z)) {
  if (data_.size() != n + m) {
    throw StructuralError(fmt::format(
        "iterate of length {} does not match n + m = {}", data_.size(), n + m));
  }
}

bool Iterate::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

std::string_view to_string(ProblemKind kind) {
  return kind == ProblemKind::kBilinear ? "bilinear" : "lp";
}

ProblemKind parse_problem_kind(std::string_view tag) {
  if (tag == "bilinear") return ProblemKind::kBilinear;
  if (tag == "lp") return ProblemKind::kLp;
  throw ArgumentError(fmt::format("unknown problem kind '{}'", tag));
}

namespace {

void check_vectors(const SparseMatrixDual& a, std::span<const double> b,
                   std::span<const double> c) {
  if (b.size() != a.nrows() || c.size() != a.ncols()) {
    throw StructuralError(fmt::format(
        "linear terms (|b| = {}, |c| = {}) do not match a {}x{} matrix",
        b.size(), c.size(), a.nrows(), a.ncols()));
  }
}

MatrixNorms norms_for(const SparseMatrixDual& a) {
  const bool svd_ok = std::min(a.nrows(), a.ncols()) <= kDenseSvdLimit;
  return compute_norms(a, svd_ok);
}

void check_dims(const SaddleProblem& p, std::size_t size) {
  if (size != p.dim()) {
    throw StructuralError(fmt::format(
        "vector of length {} does not match problem dimension {}", size, p.dim()));
  }
}

}  // namespace

SaddleProblem SaddleProblem::bilinear(std::shared_ptr<const SparseMatrixDual> a,
                                      std::vector<double> b,
                                      std::vector<double> c) {
  check_vectors(*a, b, c);
  SaddleProblem p;
  p.kind_ = ProblemKind::kBilinear;
  p.norms_ = norms_for(*a);
  p.matrix_ = std::move(a);
  p.b_ = std::move(b);
  p.c_ = std::move(c);
  return p;
}

SaddleProblem SaddleProblem::lp(std::shared_ptr<const SparseMatrixDual> a,
                                std::vector<double> b, std::vector<double> c,
                                std::optional<Iterate> known_optimum,
                                bool dual_nonnegative) {
  check_vectors(*a, b, c);
  if (known_optimum &&
      (known_optimum->n() != a->ncols() || known_optimum->m() != a->nrows())) {
    throw StructuralError("known optimum does not match the matrix shape");
  }
  SaddleProblem p;
  p.kind_ = ProblemKind::kLp;
  p.norms_ = norms_for(*a);
  p.matrix_ = std::move(a);
  p.b_ = std::move(b);
  p.c_ = std::move(c);
  p.known_optimum_ = std::move(known_optimum);
  p.dual_nonnegative_ = dual_nonnegative;
  return p;
}

SaddleProblem SaddleProblem::with_reference_solution(Iterate z) const {
  if (z.n() != n() || z.m() != m()) {
    throw StructuralError("reference solution does not match the matrix shape");
  }
  SaddleProblem p = *this;
  p.reference_solution_ = std::move(z);
  return p;
}

SaddleProblem SaddleProblem::with_hoffman_constant(double h) const {
  SaddleProblem p = *this;
  p.hoffman_constant_ = h;
  return p;
}

void full_operator_into(const SaddleProblem& problem, std::span<const double> z,
                        std::span<double> out) {
  check_dims(problem, z.size());
  check_dims(problem, out.size());
  const std::size_t n = problem.n();
  const SparseMatrixDual& a = problem.matrix();
  a.multiply_transpose(z.subspan(n), out.first(n));
  a.multiply(z.first(n), out.subspan(n));
  for (std::size_t i = n; i < out.size(); ++i) out[i] = -out[i];
  if (problem.is_bilinear()) {
    for (std::size_t j = 0; j < n; ++j) out[j] += problem.c()[j];
    for (std::size_t i = 0; i < problem.m(); ++i) out[n + i] += problem.b()[i];
  }
}

std::vector<double> full_operator(const SaddleProblem& problem, const Iterate& z) {
  std::vector<double> out(problem.dim());
  full_operator_into(problem, z.values(), out);
  return out;
}

std::vector<double> linear_offset(const SaddleProblem& problem) {
  std::vector<double> out(problem.dim(), 0.0);
  if (problem.is_bilinear()) {
    std::copy(problem.c().begin(), problem.c().end(), out.begin());
    std::copy(problem.b().begin(), problem.b().end(),
              out.begin() + static_cast<std::ptrdiff_t>(problem.n()));
  }
  return out;
}

void prox_in_place(const SaddleProblem& problem, std::span<double> v, double tau) {
  if (problem.is_bilinear()) return;
  const std::size_t n = problem.n();
  for (std::size_t j = 0; j < n; ++j) {
    v[j] = std::max(v[j] - tau * problem.c()[j], 0.0);
  }
  for (std::size_t i = 0; i < problem.m(); ++i) {
    double y = v[n + i] - tau * problem.b()[i];
    v[n + i] = problem.dual_nonnegative() ? std::max(y, 0.0) : y;
  }
}

Iterate prox_step(const SaddleProblem& problem, const Iterate& v, double tau) {
  check_dims(problem, v.size());
  if (!(tau > 0.0)) throw ArgumentError("prox step size must be positive");
  Iterate out = v;
  prox_in_place(problem, out.values(), tau);
  return out;
}

std::vector<double> gap_linear_coefficients(const SaddleProblem& problem,
                                            const Iterate& z) {
  check_dims(problem, z.size());
  const std::size_t n = problem.n();
  std::vector<double> g(problem.dim());
  std::span<double> gx = std::span(g).first(n);
  std::span<double> gy = std::span(g).subspan(n);
  problem.matrix().multiply_transpose(z.y(), gx);
  problem.matrix().multiply(z.x(), gy);
  for (std::size_t j = 0; j < n; ++j) gx[j] = -(gx[j] + problem.c()[j]);
  for (std::size_t i = 0; i < problem.m(); ++i) gy[i] -= problem.b()[i];
  return g;
}

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

LeastSquaresResult min_norm_least_squares(const SparseMatrixDual& a,
                                          bool transpose,
                                          std::span<const double> rhs,
                                          double tol) {
  // B = A or A^T; `apply` computes B v, `adjoint` computes B^T v.
  const std::size_t rows = transpose ? a.ncols() : a.nrows();
  const std::size_t cols = transpose ? a.nrows() : a.ncols();
  auto apply = [&](std::span<const double> v, std::span<double> out) {
    transpose ? a.multiply_transpose(v, out) : a.multiply(v, out);
  };
  auto adjoint = [&](std::span<const double> v, std::span<double> out) {
    transpose ? a.multiply(v, out) : a.multiply_transpose(v, out);
  };

  LeastSquaresResult result;
  result.solution.assign(cols, 0.0);
  std::vector<double> s(rhs.begin(), rhs.end());
  std::vector<double> t(cols), p(cols), q(rows);
  adjoint(s, t);
  p = t;
  double gamma = 0.0;
  for (double v : t) gamma += v * v;
  const double stop = tol * std::sqrt(gamma);
  const int max_iter = static_cast<int>(20 * std::min(rows, cols) + 200);

  while (std::sqrt(gamma) > stop && gamma > 0.0) {
    if (result.iterations >= max_iter) {
      throw ToleranceError(fmt::format(
          "least-squares solve stalled after {} iterations", result.iterations));
    }
    apply(p, q);
    double qq = 0.0;
    for (double v : q) qq += v * v;
    if (qq == 0.0) break;
    const double alpha = gamma / qq;
    for (std::size_t k = 0; k < cols; ++k) result.solution[k] += alpha * p[k];
    for (std::size_t k = 0; k < rows; ++k) s[k] -= alpha * q[k];
    adjoint(s, t);
    double next = 0.0;
    for (double v : t) next += v * v;
    const double beta = next / gamma;
    gamma = next;
    for (std::size_t k = 0; k < cols; ++k) p[k] = t[k] + beta * p[k];
    ++result.iterations;
  }

  // Recompute the residual directly rather than trusting the recursion.
  apply(result.solution, q);
  double res = 0.0;
  for (std::size_t k = 0; k < rows; ++k) {
    const double d = q[k] - rhs[k];
    res += d * d;
  }
  result.residual = std::sqrt(res);
  return result;
}

namespace {

// Corrections (dx, dy) with x - dx in {A x = b} and y - dy in {A^T y = -c}.
std::pair<std::vector<double>, std::vector<double>> optimal_set_corrections(
    const SaddleProblem& problem, const Iterate& z) {
  const SparseMatrixDual& a = problem.matrix();
  std::vector<double> rx(problem.m());
  a.multiply(z.x(), rx);
  for (std::size_t i = 0; i < rx.size(); ++i) rx[i] -= problem.b()[i];
  std::vector<double> ry(problem.n());
  a.multiply_transpose(z.y(), ry);
  for (std::size_t j = 0; j < ry.size(); ++j) ry[j] += problem.c()[j];

  LeastSquaresResult dx = min_norm_least_squares(a, false, rx);
  LeastSquaresResult dy = min_norm_least_squares(a, true, ry);
  if (dx.residual > kInfeasibleResidual * std::max(1.0, norm2(rx)) ||
      dy.residual > kInfeasibleResidual * std::max(1.0, norm2(ry))) {
    throw InfeasibleError(fmt::format(
        "optimal set is empty: least-squares residuals {:.3e} (Ax=b), "
        "{:.3e} (A^T y=-c)",
        dx.residual, dy.residual));
  }
  return {std::move(dx.solution), std::move(dy.solution)};
}

}  // namespace

double distance_to_optimum(const SaddleProblem& problem, const Iterate& z) {
  check_dims(problem, z.size());
  if (problem.is_bilinear()) {
    const auto [dx, dy] = optimal_set_corrections(problem, z);
    const double nx = norm2(dx);
    const double ny = norm2(dy);
    return std::sqrt(nx * nx + ny * ny);
  }
  if (!problem.known_optimum()) {
    throw UnsupportedError(
        "distance to optimum needs an LP with a certified known optimum");
  }
  return distance(z.values(), problem.known_optimum()->values());
}

Iterate project_to_optimal_set(const SaddleProblem& problem, const Iterate& z) {
  check_dims(problem, z.size());
  if (!problem.is_bilinear()) {
    if (!problem.known_optimum()) {
      throw UnsupportedError("projection needs a bilinear problem or known optimum");
    }
    return *problem.known_optimum();
  }
  const auto [dx, dy] = optimal_set_corrections(problem, z);
  Iterate out = z;
  for (std::size_t j = 0; j < dx.size(); ++j) out.x()[j] -= dx[j];
  for (std::size_t i = 0; i < dy.size(); ++i) out.y()[i] -= dy[i];
  return out;
}

}  // namespace rsegm
