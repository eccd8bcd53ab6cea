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

#include "divbs/objective.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "divbs/error.h"
#include "oracles.h"

namespace divbs {
namespace {

using Subset = std::vector<std::size_t>;

TEST(BasisOfSubsetTest, DependentRowIsSkipped) {
  const FeatureMatrix m(2, 2, {1, 0, 2, 0});
  const OrthonormalBasis basis = BasisOfSubset(m, Subset{0, 1});
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(basis.vectors()[0], (Vector{1, 0}));
}

TEST(BasisOfSubsetTest, EmptySubset) {
  const FeatureMatrix m(2, 2, {1, 0, 0, 1});
  EXPECT_TRUE(BasisOfSubset(m, Subset{}).empty());
}

TEST(BasisOfSubsetTest, IndependentGaussianRowsGiveFullRank) {
  std::mt19937_64 rng(1);
  const FeatureMatrix m = testing::RandomGaussian(5, 8, rng);
  const OrthonormalBasis basis = BasisOfSubset(m, Subset{0, 1, 2, 3, 4});
  EXPECT_EQ(basis.size(), 5u);
  EXPECT_LE(testing::GramDeviation(basis.vectors()), 1e-9);
}

TEST(BasisOfSubsetTest, RejectsDuplicateAndOutOfRange) {
  const FeatureMatrix m(2, 2, {1, 0, 0, 1});
  EXPECT_THROW(BasisOfSubset(m, Subset{0, 0}), ContractViolation);
  EXPECT_THROW(BasisOfSubset(m, Subset{2}), ContractViolation);
}

TEST(EvaluateSubsetTest, HandValues) {
  const FeatureMatrix m(2, 2, {1, 0, 0, 1});
  const ObjectiveValue one = EvaluateSubset(m, Subset{0});
  EXPECT_DOUBLE_EQ(one.r_prime, 1.0);
  EXPECT_DOUBLE_EQ(one.r, 1.0);
  EXPECT_EQ(one.basis_size, 1u);
  const ObjectiveValue both = EvaluateSubset(m, Subset{0, 1});
  EXPECT_DOUBLE_EQ(both.r_prime, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(both.r, 2.0);
}

TEST(EvaluateSubsetTest, EmptySubsetIsExactlyZero) {
  const FeatureMatrix m(2, 2, {1, 0, 0, 1});
  const ObjectiveValue v = EvaluateSubset(m, Subset{});
  EXPECT_EQ(v.r, 0.0);
  EXPECT_EQ(v.r_prime, 0.0);
  EXPECT_EQ(v.basis_size, 0u);
}

TEST(EvaluateSubsetTest, ZeroRowsOnlyGiveZero) {
  const FeatureMatrix m(3, 2, {0, 0, 0, 0, 1, 1});
  const ObjectiveValue v = EvaluateSubset(m, Subset{0, 1});
  EXPECT_EQ(v.basis_size, 0u);
  EXPECT_EQ(v.r, 0.0);
}

TEST(EvaluateSubsetTest, RIsSqrtBasisSizeTimesRPrime) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const FeatureMatrix m = testing::RandomGaussian(9, 5, rng);
    const ObjectiveValue v = EvaluateSubset(m, Subset{0, 3, 5, 8});
    EXPECT_LE(testing::RelativeError(
                  v.r, std::sqrt(static_cast<double>(v.basis_size)) * v.r_prime),
              1e-12);
  }
}

// The value does not depend on which orthonormal basis of span(g(S)) is used:
// rotating the basis by random orthogonal matrices leaves r unchanged.
TEST(EvaluateSubsetProperty, InvariantUnderBasisRotation) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 50; ++t) {
    const FeatureMatrix m = testing::RandomGaussian(8, 4, rng);
    Subset s(8);
    std::iota(s.begin(), s.end(), std::size_t{0});
    std::shuffle(s.begin(), s.end(), rng);
    s.resize(1 + rng() % 4);
    const ObjectiveValue v = EvaluateSubset(m, s);
    const Vector sum = testing::TwoPassColumnSums(m);
    const auto ref = testing::ReferenceBasis(m, s);
    ASSERT_EQ(ref.size(), v.basis_size);
    for (int k = 0; k < 5; ++k) {
      const auto rotated = testing::Rotate(ref, testing::RandomOrthogonal(ref.size(), rng));
      EXPECT_LE(testing::RelativeError(testing::RFromBasis(rotated, sum), v.r), 1e-9);
    }
  }
}

// r is the maximum of sum_e e . Sum over orthonormal bases of the span: random
// bases never beat it, and the basis reflected so that sum_e e lines up with
// the projected Sum attains it.
TEST(EvaluateSubsetProperty, RIsTheMaximumOverBases) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const FeatureMatrix m = testing::RandomGaussian(7, 5, rng);
    const Subset s{1, 2, 4};
    const double r = EvaluateSubset(m, s).r;
    const Vector sum = BatchSum(m);
    const auto q = testing::ReferenceBasis(m, s);
    const std::size_t k = q.size();
    auto linear = [&](const std::vector<std::vector<double>>& basis) {
      double acc = 0.0;
      for (const auto& e : basis) acc += testing::CompensatedDot(e, sum);
      return acc;
    };
    for (int i = 0; i < 20; ++i) {
      EXPECT_LE(linear(testing::Rotate(q, testing::RandomOrthogonal(k, rng))), r * (1 + 1e-12));
    }
    // Householder reflection taking (1,...,1)/sqrt(k) onto the unit coefficient
    // vector w of the projected Sum.
    std::vector<double> w(k);
    double wn = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      w[i] = testing::CompensatedDot(q[i], sum);
      wn += w[i] * w[i];
    }
    for (double& x : w) x /= std::sqrt(wn);
    std::vector<double> u(k, 1.0 / std::sqrt(static_cast<double>(k)));
    std::vector<double> v(k);
    double vv = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      v[i] = u[i] - w[i];
      vv += v[i] * v[i];
    }
    std::vector<std::vector<double>> reflect(k, std::vector<double>(k));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        reflect[i][j] = (i == j ? 1.0 : 0.0) - (vv > 0 ? 2.0 * v[i] * v[j] / vv : 0.0);
      }
    }
    const auto aligned = testing::Rotate(q, reflect);
    EXPECT_LE(testing::GramDeviation(aligned), 1e-12);
    EXPECT_LE(testing::RelativeError(linear(aligned), r), 1e-12);
  }
}

TEST(EvaluateSubsetProperty, MonotoneAndOrderInvariant) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const FeatureMatrix m = testing::RandomGaussian(10, 1 + rng() % 8, rng);
    Subset all(10);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::shuffle(all.begin(), all.end(), rng);
    const Subset small(all.begin(), all.begin() + 2);
    const Subset big(all.begin(), all.begin() + 5);
    EXPECT_LE(EvaluateSubset(m, small).r_prime, EvaluateSubset(m, big).r_prime + 1e-9);
    Subset reversed(big.rbegin(), big.rend());
    EXPECT_LE(testing::RelativeError(EvaluateSubset(m, big).r, EvaluateSubset(m, reversed).r),
              1e-12);
  }
}

TEST(EvaluateSubsetProperty, ScalesLinearlyWithFeatures) {
  std::mt19937_64 rng(10);
  for (double c : {0.37, 3.0, 1234.5}) {
    const FeatureMatrix m = testing::RandomGaussian(9, 4, rng);
    const Subset s{0, 4, 7};
    const ObjectiveValue base = EvaluateSubset(m, s);
    const ObjectiveValue scaled = EvaluateSubset(m.Scaled(c), s);
    EXPECT_LE(testing::RelativeError(scaled.r_prime, c * base.r_prime), 1e-12);
    EXPECT_LE(testing::RelativeError(scaled.r, c * base.r), 1e-12);
  }
}

// r' does not have diminishing returns: with Sum orthogonal to a, adding
// a alone gains nothing, yet after b it completes the span and gains 1 - 1/sqrt2.
TEST(EvaluateSubsetTest, DiminishingReturnsWitness) {
  const FeatureMatrix m(3, 2, {1, 0, 1, 1, -2, 0});  // Sum = (0, 1)
  const double empty = EvaluateSubset(m, Subset{}).r_prime;
  const double a = EvaluateSubset(m, Subset{0}).r_prime;
  const double b = EvaluateSubset(m, Subset{1}).r_prime;
  const double ab = EvaluateSubset(m, Subset{1, 0}).r_prime;
  EXPECT_NEAR(a, 0.0, 1e-15);
  EXPECT_NEAR(b, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(ab, 1.0, 1e-15);
  EXPECT_LT(a - empty, ab - b);
}

TEST(BinomialTest, Values) {
  EXPECT_EQ(BinomialCoefficient(10, 4), 210u);
  EXPECT_EQ(BinomialCoefficient(5, 0), 1u);
  EXPECT_EQ(BinomialCoefficient(3, 5), 0u);
  EXPECT_EQ(BinomialCoefficient(64, 32), 1832624140942590534ull);
  EXPECT_EQ(BinomialCoefficient(200, 100), UINT64_MAX);
}

TEST(BruteForceTest, HandExampleTieBreak) {
  const FeatureMatrix m(3, 2, {1, 0, 1, 0, 0, 1});
  const BruteForceResult opt = BruteForceOptimum(m, 2);
  EXPECT_EQ(opt.indices, (Subset{0, 2}));
  EXPECT_DOUBLE_EQ(opt.value.r, std::sqrt(10.0));
  EXPECT_EQ(opt.subsets_evaluated, 3u);
}

TEST(BruteForceTest, SpanningBudgetProjectsWholeSum) {
  std::mt19937_64 rng(12);
  const FeatureMatrix m = testing::RandomGaussian(6, 2, rng);
  const BruteForceResult opt = BruteForceOptimum(m, 3);
  EXPECT_LE(testing::RelativeError(opt.value.r, std::sqrt(2.0) * Norm(BatchSum(m))), 1e-12);
}

TEST(BruteForceTest, MatchesFullEnumerationOverAllSmallerSizes) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + rng() % 6;
    const FeatureMatrix m = testing::RandomGaussian(n, 1 + rng() % 4, rng);
    const std::size_t budget = 1 + rng() % n;
    double best = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      Subset s;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) s.push_back(i);
      }
      if (s.size() <= budget) best = std::max(best, EvaluateSubset(m, s).r);
    }
    EXPECT_LE(testing::RelativeError(BruteForceOptimum(m, budget).value.r, best), 1e-12);
  }
}

TEST(BruteForceTest, RefusesAboveCap) {
  std::mt19937_64 rng(14);
  const FeatureMatrix m = testing::RandomGaussian(30, 3, rng);
  try {
    BruteForceOptimum(m, 15, kDefaultEps, 1000);
    FAIL() << "expected RefusalError";
  } catch (const RefusalError& e) {
    EXPECT_NE(std::string(e.what()).find("cap of 1000"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace divbs
