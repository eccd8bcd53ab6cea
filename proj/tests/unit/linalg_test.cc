// Copyright 2026 The DivBS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "divbs/linalg.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "divbs/error.h"
#include "oracles.h"

namespace divbs {
namespace {

TEST(DotTest, HandValues) {
  const std::vector<double> e1{1, 0}, e2{0, 1}, a{1, 2}, b{3, 4};
  EXPECT_EQ(Dot(e1, e2), 0.0);
  EXPECT_EQ(Dot(a, b), 11.0);
}

TEST(DotTest, LengthMismatchThrows) {
  const std::vector<double> a{1, 2}, b{1, 2, 3};
  EXPECT_THROW(Dot(a, b), ContractViolation);
}

TEST(DotTest, MatchesCompensatedOracle) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(512), b(512);
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = g(rng);
      b[i] = g(rng);
      abs_sum += std::abs(a[i] * b[i]);
    }
    const double ref = testing::CompensatedDot(a, b);
    // Relative to the magnitude of the summed terms.
    EXPECT_LE(std::abs(Dot(a, b) - ref), 1e-12 * abs_sum);
  }
}

TEST(RowDotsTest, BitwiseEqualToRowByRowDot) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 7u, 8u, 9u, 33u}) {
    const FeatureMatrix m = testing::RandomGaussian(n, 13, rng);
    const FeatureMatrix v = testing::RandomGaussian(1, 13, rng);
    const Vector dots = RowDots(m, v.row(0));
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(dots[i], Dot(m.row(i), v.row(0)));
  }
}

TEST(BatchSumTest, HandValues) {
  EXPECT_EQ(BatchSum(FeatureMatrix(2, 2, {1, 0, 0, 1})), (Vector{1, 1}));
  EXPECT_EQ(BatchSum(FeatureMatrix(1, 2, {3, -2})), (Vector{3, -2}));
}

TEST(BatchSumTest, MatchesTwoPassOracle) {
  std::mt19937_64 rng(3);
  const FeatureMatrix m = testing::RandomGaussian(100, 17, rng);
  const Vector sum = BatchSum(m);
  const auto ref = testing::TwoPassColumnSums(m);
  for (std::size_t j = 0; j < sum.size(); ++j) {
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < m.n_rows(); ++i) abs_sum += std::abs(m.row(i)[j]);
    EXPECT_LE(std::abs(sum[j] - ref[j]), 1e-12 * abs_sum) << "column " << j;
  }
}

TEST(FeatureMatrixTest, RejectsInvalidConstruction) {
  EXPECT_THROW(FeatureMatrix(0, 2, {}), ContractViolation);
  EXPECT_THROW(FeatureMatrix(1, 2, {1.0}), ContractViolation);
  EXPECT_THROW(FeatureMatrix(1, 1, {std::nan("")}), ContractViolation);
  EXPECT_THROW(FeatureMatrix(1, 1, {INFINITY}), ContractViolation);
  EXPECT_THROW(FeatureMatrix(2, 1, {1, 2}, std::vector<std::int32_t>{0}), ContractViolation);
}

TEST(ResidualTest, HandValues) {
  OrthonormalBasis basis(2);
  basis.Extend(std::vector<double>{1, 0});
  EXPECT_EQ(Residual(std::vector<double>{1, 1}, basis), (Vector{0, 1}));
  EXPECT_EQ(Residual(std::vector<double>{1, 0}, basis), (Vector{0, 0}));
}

TEST(ResidualTest, VectorInSpanLeavesNoResidual) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const FeatureMatrix gens = testing::RandomGaussian(3, 9, rng);
    OrthonormalBasis basis(9);
    for (std::size_t i = 0; i < 3; ++i) ASSERT_TRUE(basis.Extend(gens.row(i)));
    Vector v(9, 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
      const double c = g(rng);
      for (std::size_t j = 0; j < 9; ++j) v[j] += c * gens.row(i)[j];
    }
    EXPECT_LE(Norm(basis.Residual(v)), 1e-9 * Norm(v));
  }
}

TEST(ExtendBasisTest, HandValues) {
  OrthonormalBasis basis(2);
  auto e = ExtendBasis(basis, std::vector<double>{3, 0});
  ASSERT_TRUE(e);
  EXPECT_EQ(*e, (Vector{1, 0}));
  EXPECT_FALSE(ExtendBasis(basis, std::vector<double>{2, 0}));
  EXPECT_EQ(basis.size(), 1u);
  e = ExtendBasis(basis, std::vector<double>{1, 1});
  ASSERT_TRUE(e);
  EXPECT_EQ(*e, (Vector{0, 1}));
}

TEST(ExtendBasisTest, ZeroVectorIsDependent) {
  OrthonormalBasis basis(3);
  EXPECT_FALSE(basis.Extend(std::vector<double>{0, 0, 0}));
}

TEST(ExtendBasisTest, ThresholdIsRelativeAboveUnitNorm) {
  OrthonormalBasis basis(2, 1e-6);
  basis.Extend(std::vector<double>{1, 0});
  // residual 5e-7 against |v| ~ 1: dependent; residual 5e-4 against |v| = 1e3: dependent too.
  EXPECT_FALSE(basis.Extend(std::vector<double>{1, 5e-7}));
  EXPECT_FALSE(basis.Extend(std::vector<double>{1e3, 5e-4}));
  EXPECT_TRUE(basis.Extend(std::vector<double>{1e3, 5e-2}));
}

// Random sequences of extensions, including exact duplicates and
// combinations, keep the basis orthonormal, bounded by dim, and able to
// reconstruct any vector from its residual plus projections.
TEST(OrthonormalBasisProperty, RandomExtensionSequences) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> dim_dist(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = static_cast<std::size_t>(dim_dist(rng));
    OrthonormalBasis basis(dim);
    std::vector<Vector> seen;
    for (int step = 0; step < 20; ++step) {
      Vector v(dim);
      if (!seen.empty() && step % 3 == 0) {
        v = seen[static_cast<std::size_t>(step) % seen.size()];  // duplicate
      } else {
        for (double& x : v) x = g(rng) * std::pow(10.0, g(rng));
      }
      seen.push_back(v);
      basis.Extend(v);
      ASSERT_LE(basis.size(), dim);
    }
    EXPECT_LE(testing::GramDeviation(basis.vectors()), 1e-9);

    Vector v(dim);
    for (double& x : v) x = g(rng);
    Vector rebuilt = basis.Residual(v);
    for (const Vector& e : basis.vectors()) {
      const double c = Dot(e, v);
      for (std::size_t j = 0; j < dim; ++j) rebuilt[j] += c * e[j];
    }
    for (std::size_t j = 0; j < dim; ++j) EXPECT_NEAR(rebuilt[j], v[j], 1e-9 * Norm(v));
  }
}

TEST(OrthonormalBasisProperty, Deterministic) {
  std::mt19937_64 rng(9);
  const FeatureMatrix m = testing::RandomGaussian(6, 6, rng);
  OrthonormalBasis a(6), b(6);
  for (std::size_t i = 0; i < 6; ++i) {
    a.Extend(m.row(i));
    b.Extend(m.row(i));
  }
  EXPECT_EQ(a.vectors(), b.vectors());
}

}  // namespace
}  // namespace divbs
