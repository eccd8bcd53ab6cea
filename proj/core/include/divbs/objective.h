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

// Orthogonalized representativeness of a subset S of a batch B.
//
// With E any orthonormal basis of span(g(S)) and Sum the batch feature sum,
//   r'(S) = ||P_S Sum|| = sqrt(sum_e (e . Sum)^2)
//   r(S)  = sqrt(|E|) * r'(S)
// r is the maximum over all such bases of sum_e e . Sum, attained when the
// basis is rotated so that sum_e e points along P_S Sum.

#ifndef DIVBS_OBJECTIVE_H_
#define DIVBS_OBJECTIVE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "divbs/linalg.h"

namespace divbs {

struct ObjectiveValue {
  double r = 0.0;
  double r_prime = 0.0;
  std::size_t basis_size = 0;
};

// Orthonormal basis of span{row(i) : i in subset}, rows taken in subset order
// and dependent rows skipped. Throws ContractViolation on a duplicate or
// out-of-range index.
OrthonormalBasis BasisOfSubset(const FeatureMatrix& features,
                               std::span<const std::size_t> subset,
                               double eps = kDefaultEps);

// r and r' of `basis` against an already computed batch sum.
ObjectiveValue ObjectiveFromBasis(const OrthonormalBasis& basis,
                                  std::span<const double> batch_sum);

ObjectiveValue EvaluateSubset(const FeatureMatrix& features,
                              std::span<const std::size_t> subset,
                              double eps = kDefaultEps);

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

struct BruteForceResult {
  std::vector<std::size_t> indices;  // ascending
  ObjectiveValue value;
  std::uint64_t subsets_evaluated = 0;
};

// Number of k-subsets of an n-set, saturating at UINT64_MAX.
std::uint64_t BinomialCoefficient(std::uint64_t n, std::uint64_t k);

// Exhaustive maximizer of r over |S| <= budget. Since r never decreases when a
// row is added, only subsets of size min(budget, n_rows) are enumerated, in
// lexicographic order; the first strict maximum wins, so ties resolve to the
// lexicographically smallest index set. Throws RefusalError when
// C(n_rows, min(budget, n_rows)) exceeds `enumeration_cap`.
BruteForceResult BruteForceOptimum(const FeatureMatrix& features, std::size_t budget,
                                   double eps = kDefaultEps,
                                   std::uint64_t enumeration_cap = kDefaultEnumerationCap);

}  // namespace divbs

#endif  // DIVBS_OBJECTIVE_H_
