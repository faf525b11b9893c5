// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rsegm/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "rsegm/errors.hpp"
#include "rsegm/random.hpp"

namespace rsegm {

namespace {

// Sparse Gaussian factor with at least one nonzero per "slot" (a column of U
// or a row of V). Returned as (slot, other, value).
std::vector<Triplet> sparse_factor(std::size_t slots, std::size_t other,
                                   double density, RandomStream& rng) {
  std::vector<Triplet> out;
  for (std::size_t s = 0; s < slots; ++s) {
    bool any = false;
    for (std::size_t o = 0; o < other; ++o) {
      if (uniform01(rng) < density) {
        out.push_back({s, o, standard_normal(rng)});
        any = true;
      }
    }
    if (!any) {
      const auto o = static_cast<std::size_t>(uniform_below(rng, other));
      out.push_back({s, o, standard_normal(rng)});
    }
  }
  return out;
}

}  // namespace

SaddleProblem generate_bilinear(std::size_t m, std::size_t n, std::size_t rank,
                                double density, std::uint64_t seed) {
  if (m == 0 || n == 0) throw ArgumentError("matrix dimensions must be positive");
  if (rank < 1 || rank > std::min(m, n)) {
    throw ArgumentError(
        fmt::format("rank {} outside [1, min(m, n) = {}]", rank, std::min(m, n)));
  }
  if (!(density > 0.0 && density <= 1.0)) {
    throw ArgumentError(fmt::format("density {} outside (0, 1]", density));
  }

  RandomStream rng(seed);
  const double r = static_cast<double>(rank);
  // P(entry nonzero) = 1 - (1 - d_f^2)^rank.
  const double factor_density =
      density >= 1.0 ? 1.0
                     : std::sqrt(-std::expm1(std::log1p(-density) / r));

  // u[k] lists (i, U_ik); v[k] lists (j, V_kj).
  const std::vector<Triplet> u = sparse_factor(rank, m, factor_density, rng);
  const std::vector<Triplet> v = sparse_factor(rank, n, factor_density, rng);
  std::vector<std::size_t> v_start(rank + 1, 0);
  for (const Triplet& t : v) ++v_start[t.row + 1];
  std::partial_sum(v_start.begin(), v_start.end(), v_start.begin());

  std::vector<Triplet> product;
  for (const Triplet& ut : u) {
    for (std::size_t p = v_start[ut.row]; p < v_start[ut.row + 1]; ++p) {
      product.push_back({ut.col, v[p].col, ut.value * v[p].value});
    }
  }
  auto a = std::make_shared<const SparseMatrixDual>(
      SparseMatrixDual::from_triplets(m, n, product));

  Iterate reference(n, m);
  for (double& x : reference.values()) x = standard_normal(rng);
  std::vector<double> b(m), c(n);
  a->multiply(reference.x(), b);
  a->multiply_transpose(reference.y(), c);
  for (double& cj : c) cj = -cj;

  return SaddleProblem::bilinear(a, std::move(b), std::move(c))
      .with_reference_solution(std::move(reference));
}

SaddleProblem build_lp_with_optimum(std::shared_ptr<const SparseMatrixDual> a,
                                    std::span<const std::size_t> basis,
                                    std::span<const double> x_basis,
                                    std::span<const double> y_dual,
                                    std::span<const double> slack) {
  const std::size_t m = a->nrows();
  const std::size_t n = a->ncols();
  if (basis.size() != m || x_basis.size() != m || y_dual.size() != m ||
      slack.size() != n - m) {
    throw ArgumentError("basis data does not match the matrix shape");
  }
  std::vector<bool> in_basis(n, false);
  for (std::size_t j : basis) {
    if (j >= n || in_basis[j]) throw ArgumentError("invalid basis index set");
    in_basis[j] = true;
  }

  Iterate optimum(n, m);
  for (std::size_t k = 0; k < m; ++k) optimum.x()[basis[k]] = x_basis[k];
  std::vector<double> b(m), c(n);
  a->multiply(optimum.x(), b);
  a->multiply_transpose(y_dual, c);
  std::size_t s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!in_basis[j]) c[j] += slack[s++];
  }
  for (std::size_t i = 0; i < m; ++i) optimum.y()[i] = -y_dual[i];
  return SaddleProblem::lp(std::move(a), std::move(b), std::move(c),
                           std::move(optimum));
}

SaddleProblem generate_lp_known_solution(std::size_t m, std::size_t n,
                                         std::uint64_t seed) {
  if (m < 1 || n <= m) {
    throw ArgumentError(fmt::format("LP generator needs n > m >= 1, got m={} n={}", m, n));
  }
  RandomStream rng(seed);
  for (int attempt = 0; attempt < kBasisRetries; ++attempt) {
    Eigen::MatrixXd dense(m, n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            standard_normal(rng);
      }
    }
    std::vector<std::size_t> columns(n);
    std::iota(columns.begin(), columns.end(), 0);
    for (std::size_t k = n - 1; k > 0; --k) {
      std::swap(columns[k], columns[uniform_below(rng, k + 1)]);
    }
    std::vector<std::size_t> basis(columns.begin(),
                                   columns.begin() + static_cast<std::ptrdiff_t>(m));
    std::sort(basis.begin(), basis.end());

    Eigen::MatrixXd block(m, m);
    for (std::size_t k = 0; k < m; ++k) {
      block.col(static_cast<Eigen::Index>(k)) =
          dense.col(static_cast<Eigen::Index>(basis[k]));
    }
    if (Eigen::PartialPivLU<Eigen::MatrixXd>(block).rcond() < kBasisMinRcond) {
      continue;
    }

    std::vector<Triplet> triplets;
    triplets.reserve(m * n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        triplets.push_back({i, j, dense(static_cast<Eigen::Index>(i),
                                        static_cast<Eigen::Index>(j))});
      }
    }
    std::vector<double> x_basis(m), y_dual(m), slack(n - m);
    for (double& v : x_basis) v = 1.0 + uniform01(rng);
    for (double& v : y_dual) v = standard_normal(rng);
    for (double& v : slack) v = 0.1 + 0.9 * uniform01(rng);
    return build_lp_with_optimum(
        std::make_shared<const SparseMatrixDual>(
            SparseMatrixDual::from_triplets(m, n, triplets)),
        basis, x_basis, y_dual, slack);
  }
  throw GenerationError(fmt::format(
      "no well-conditioned basis after {} attempts", kBasisRetries));
}

SaddleProblem counterexample_lp() {
  const Triplet entry{0, 1, 1.0};
  auto a = std::make_shared<const SparseMatrixDual>(
      SparseMatrixDual::from_triplets(1, 2, std::span(&entry, 1)));
  return SaddleProblem::lp(a, {1.0}, {1.0, 1.0}, Iterate(2, 1),
                           /*dual_nonnegative=*/true);
}

}  // namespace rsegm
