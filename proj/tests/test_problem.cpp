// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "rsegm/errors.hpp"
#include "rsegm/generators.hpp"
#include "rsegm/problem.hpp"
#include "rsegm/random.hpp"
#include "support/reference.hpp"

namespace rsegm {
namespace {

std::shared_ptr<const SparseMatrixDual> matrix(std::size_t m, std::size_t n,
                                               std::vector<Triplet> t) {
  return std::make_shared<const SparseMatrixDual>(build_matrix(m, n, t));
}

SaddleProblem identity_bilinear(std::vector<double> b = {0, 0}) {
  return SaddleProblem::bilinear(matrix(2, 2, {{0, 0, 1}, {1, 1, 1}}), std::move(b),
                                 {0, 0});
}

Iterate point(std::size_t n, std::size_t m, std::vector<double> v) {
  return Iterate(n, m, std::move(v));
}

TEST(Problem, ShapeChecks) {
  EXPECT_THROW(SaddleProblem::bilinear(matrix(2, 2, {}), {0}, {0, 0}), StructuralError);
  EXPECT_THROW(Iterate(2, 1, {1.0, 2.0}), StructuralError);
  EXPECT_EQ(parse_problem_kind("lp"), ProblemKind::kLp);
  EXPECT_THROW(parse_problem_kind("qp"), ArgumentError);
}

TEST(FullOperator, IdentityBilinear) {
  const SaddleProblem p = identity_bilinear();
  EXPECT_EQ(full_operator(p, point(2, 2, {1, 0, 0, 0})),
            (std::vector<double>{0, 0, -1, 0}));
}

TEST(FullOperator, LpHandProduct) {
  const SaddleProblem p = SaddleProblem::lp(matrix(1, 2, {{0, 1, 1}}), {0}, {0, 0});
  EXPECT_EQ(full_operator(p, point(2, 1, {2, 3, 5})), (std::vector<double>{0, 5, -3}));
}

TEST(FullOperator, ZeroAtOriginWithoutLinearTerms) {
  const SaddleProblem p = generate_bilinear(4, 5, 2, 1.0, 3);
  const SaddleProblem homogeneous =
      SaddleProblem::bilinear(p.matrix_ptr(), std::vector<double>(4, 0.0),
                              std::vector<double>(5, 0.0));
  for (double v : full_operator(homogeneous, homogeneous.zero_iterate())) {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(Prox, LpClampAndShift) {
  const SaddleProblem p =
      SaddleProblem::lp(matrix(1, 2, {{0, 0, 1}, {0, 1, 1}}), {-1}, {1, 0});
  const Iterate out = prox_step(p, point(2, 1, {0.5, -0.3, 0.2}), 0.1);
  EXPECT_NEAR(out[0], 0.4, 1e-15);
  EXPECT_EQ(out[1], 0.0);
  EXPECT_NEAR(out[2], 0.3, 1e-15);
  EXPECT_THROW(prox_step(p, out, 0.0), ArgumentError);
}

TEST(Prox, BilinearIsIdentity) {
  const SaddleProblem p = identity_bilinear({1, 2});
  const Iterate v = point(2, 2, {0.3, -7, 1e9, -2});
  EXPECT_EQ(prox_step(p, v, 0.7), v);
}

TEST(GapCoefficients, IdentityBilinear) {
  const SaddleProblem p = identity_bilinear();
  EXPECT_EQ(gap_linear_coefficients(p, point(2, 2, {1, 0, 0, 0})),
            (std::vector<double>{0, 0, 1, 0}));
}

TEST(GapCoefficients, ZeroAtSaddlePoint) {
  const SaddleProblem p = generate_bilinear(4, 6, 3, 1.0, 5);
  for (double g : gap_linear_coefficients(p, *p.reference_solution())) {
    EXPECT_NEAR(g, 0.0, 1e-12);
  }
}

TEST(GapCoefficients, MatchDirectEvaluation) {
  const SaddleProblem p = generate_bilinear(3, 4, 3, 1.0, 8);
  RandomStream rng(17);
  Iterate z = p.zero_iterate();
  for (double& v : z.values()) v = standard_normal(rng);
  const std::vector<double> g = gap_linear_coefficients(p, z);
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(z.x().data(), 4);
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(z.y().data(), 3);
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd xh(4), yh(3);
    for (auto& v : xh) v = standard_normal(rng);
    for (auto& v : yh) v = standard_normal(rng);
    const double direct =
        testing::lagrangian(p, x, yh) - testing::lagrangian(p, xh, y);
    double linear = 0.0;
    for (int j = 0; j < 4; ++j) linear += g[j] * (xh[j] - x[j]);
    for (int i = 0; i < 3; ++i) linear += g[4 + i] * (yh[i] - y[i]);
    EXPECT_NEAR(linear, direct, 1e-10);
  }
}

TEST(Distance, HandNorm) {
  // Z* = {((1, 2), (0, 0))}
  const SaddleProblem p = identity_bilinear({1, 2});
  EXPECT_NEAR(distance_to_optimum(p, point(2, 2, {0, 0, 3, 4})), std::sqrt(30.0),
              1e-12);
  EXPECT_NEAR(distance_to_optimum(p, point(2, 2, {1, 2, 0, 0})), 0.0, 1e-14);
  const Iterate proj = project_to_optimal_set(p, point(2, 2, {0, 0, 3, 4}));
  EXPECT_NEAR(proj[0], 1.0, 1e-12);
  EXPECT_NEAR(proj[1], 2.0, 1e-12);
  EXPECT_NEAR(proj[2], 0.0, 1e-12);
}

TEST(Distance, RankDeficientUsesMinimumNormCorrection) {
  // A = [[1, 1]]: Z* = {x1 + x2 = 2} x {y = 0}.
  const SaddleProblem p =
      SaddleProblem::bilinear(matrix(1, 2, {{0, 0, 1}, {0, 1, 1}}), {2}, {0, 0});
  EXPECT_NEAR(distance_to_optimum(p, point(2, 1, {0, 0, 0})), std::sqrt(2.0), 1e-12);
}

TEST(Distance, InconsistentSystem) {
  const SaddleProblem p =
      SaddleProblem::bilinear(matrix(2, 1, {{0, 0, 1}, {1, 0, 1}}), {1, -1}, {0});
  EXPECT_THROW(distance_to_optimum(p, p.zero_iterate()), InfeasibleError);
}

TEST(Distance, LpNeedsKnownOptimum) {
  const SaddleProblem p = SaddleProblem::lp(matrix(1, 2, {{0, 1, 1}}), {1}, {1, 1});
  EXPECT_THROW(distance_to_optimum(p, p.zero_iterate()), UnsupportedError);
}

TEST(Counterexample, Instance) {
  const SaddleProblem p = counterexample_lp();
  EXPECT_EQ(p.matrix().to_dense(), (std::vector<double>{0, 1}));
  EXPECT_EQ(p.b()[0], 1.0);
  EXPECT_EQ(p.c()[0], 1.0);
  EXPECT_EQ(p.c()[1], 1.0);
  EXPECT_TRUE(p.dual_nonnegative());
  EXPECT_EQ(distance_to_optimum(p, p.zero_iterate()), 0.0);
  EXPECT_EQ(distance_to_optimum(p, point(2, 1, {7.5, 0, 0})), 7.5);
  const Eigen::VectorXd x_star = Eigen::VectorXd::Zero(2);
  EXPECT_EQ(testing::lagrangian(p, x_star, Eigen::VectorXd::Zero(1)), 0.0);
}

TEST(Generators, BilinearFeasible) {
  const SaddleProblem p = generate_bilinear(2, 2, 2, 1.0, 1);
  const Iterate& ref = *p.reference_solution();
  std::vector<double> ax(2), aty(2);
  p.matrix().multiply(ref.x(), ax);
  p.matrix().multiply_transpose(ref.y(), aty);
  for (int i = 0; i < 2; ++i) {
    EXPECT_LT(std::abs(ax[i] - p.b()[i]), 1e-10);
    EXPECT_LT(std::abs(aty[i] + p.c()[i]), 1e-10);
  }
  EXPECT_NEAR(distance_to_optimum(p, ref), 0.0, 1e-10);
}

TEST(Generators, RankOneSigmaMatchesDenseSvd) {
  const SaddleProblem p = generate_bilinear(6, 5, 1, 1.0, 4);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(testing::dense(p));
  const auto& s = svd.singularValues();
  ASSERT_GT(s[0], 0.0);
  EXPECT_LT(s[1], 1e-10 * s[0]);
  EXPECT_NEAR(*p.norms().sigma_min_plus, s[0], 1e-10 * s[0]);
}

TEST(Generators, BilinearDensityAndRank) {
  const SaddleProblem p = generate_bilinear(100, 120, 10, 0.05, 7);
  const double density = static_cast<double>(p.matrix().nnz()) / (100.0 * 120.0);
  EXPECT_GT(density, 0.02);
  EXPECT_LT(density, 0.1);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(testing::dense(p));
  EXPECT_LT(svd.singularValues()[10], 1e-9 * svd.singularValues()[0]);
}

TEST(Generators, Deterministic) {
  const SaddleProblem a = generate_bilinear(8, 9, 3, 0.5, 42);
  const SaddleProblem b = generate_bilinear(8, 9, 3, 0.5, 42);
  EXPECT_EQ(a.matrix().to_triplets(), b.matrix().to_triplets());
  EXPECT_EQ(*a.reference_solution(), *b.reference_solution());
  const SaddleProblem l1 = generate_lp_known_solution(5, 9, 3);
  const SaddleProblem l2 = generate_lp_known_solution(5, 9, 3);
  EXPECT_EQ(l1.matrix().to_triplets(), l2.matrix().to_triplets());
  EXPECT_EQ(*l1.known_optimum(), *l2.known_optimum());
}

TEST(Generators, InvalidParameters) {
  EXPECT_THROW(generate_bilinear(0, 3, 1, 1.0, 1), ArgumentError);
  EXPECT_THROW(generate_bilinear(3, 3, 4, 1.0, 1), ArgumentError);
  EXPECT_THROW(generate_bilinear(3, 3, 2, 0.0, 1), ArgumentError);
  EXPECT_THROW(generate_lp_known_solution(5, 5, 1), ArgumentError);
}

TEST(Generators, HandLpWithOptimum) {
  const std::vector<std::size_t> basis = {0};
  const SaddleProblem p = build_lp_with_optimum(
      matrix(1, 2, {{0, 0, 1}, {0, 1, 1}}), basis, std::vector<double>{2},
      std::vector<double>{1}, std::vector<double>{2});
  EXPECT_EQ(p.b()[0], 2.0);
  EXPECT_EQ(p.c()[0], 1.0);
  EXPECT_EQ(p.c()[1], 3.0);
  EXPECT_EQ(*p.known_optimum(), point(2, 1, {2, 0, -1}));
}

// z* is a fixed point of prox(z - tau F(z)) exactly when the KKT conditions
// hold for the LP.
TEST(Generators, LpKktResidual) {
  const SaddleProblem p = generate_lp_known_solution(20, 50, 3);
  const Iterate& z = *p.known_optimum();
  std::vector<double> f = full_operator(p, z);
  for (const double tau : {1e-3, 1.0}) {
    Iterate v = z;
    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= tau * f[k];
    const Iterate next = prox_step(p, v, tau);
    EXPECT_LT(distance(next.values(), z.values()), 1e-12 * (1.0 + tau));
  }
  // Strict complementarity: every nonbasic reduced cost is at least 0.1.
  std::vector<double> reduced(50);
  p.matrix().multiply_transpose(z.y(), reduced);
  int basic = 0;
  for (std::size_t j = 0; j < 50; ++j) {
    const double s = p.c()[j] + reduced[j];
    if (z.x()[j] > 0) {
      ++basic;
      EXPECT_GE(z.x()[j], 1.0);
      EXPECT_NEAR(s, 0.0, 1e-12);
    } else {
      EXPECT_GE(s, 0.1 - 1e-12);
    }
  }
  EXPECT_EQ(basic, 20);
}

}  // namespace
}  // namespace rsegm
