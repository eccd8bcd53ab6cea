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

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "divbs/error.h"

namespace divbs {

OrthonormalBasis BasisOfSubset(const FeatureMatrix& features,
                               std::span<const std::size_t> subset, double eps) {
  std::vector<bool> seen(features.n_rows(), false);
  OrthonormalBasis basis(features.dim(), eps);
  for (std::size_t idx : subset) {
    if (idx >= features.n_rows()) {
      throw ContractViolation("subset index " + std::to_string(idx) + " out of range for " +
                              std::to_string(features.n_rows()) + " rows");
    }
    if (seen[idx]) {
      throw ContractViolation("duplicate subset index " + std::to_string(idx));
    }
    seen[idx] = true;
    basis.Extend(features.row(idx));
  }
  return basis;
}

ObjectiveValue ObjectiveFromBasis(const OrthonormalBasis& basis,
                                  std::span<const double> batch_sum) {
  double sq = 0.0;
  for (const Vector& e : basis.vectors()) {
    const double c = Dot(e, batch_sum);
    sq += c * c;
  }
  ObjectiveValue out;
  out.basis_size = basis.size();
  out.r_prime = std::sqrt(sq);
  out.r = std::sqrt(static_cast<double>(basis.size())) * out.r_prime;
  return out;
}

ObjectiveValue EvaluateSubset(const FeatureMatrix& features,
                              std::span<const std::size_t> subset, double eps) {
  const OrthonormalBasis basis = BasisOfSubset(features, subset, eps);
  return ObjectiveFromBasis(basis, BatchSum(features));
}

std::uint64_t BinomialCoefficient(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // c * (n - k + i) / i stays integral at every step.
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(c, i);
    const std::uint64_t c_red = c / g;
    const std::uint64_t den = i / g;
    const std::uint64_t num_red = num / den;
    if (c_red != 0 && num_red > kMax / c_red) return kMax;
    c = c_red * num_red;
  }
  return c;
}

BruteForceResult BruteForceOptimum(const FeatureMatrix& features, std::size_t budget,
                                   double eps, std::uint64_t enumeration_cap) {
  if (budget == 0) throw ContractViolation("BruteForceOptimum: budget must be at least 1");
  const std::size_t n = features.n_rows();
  const std::size_t k = std::min(budget, n);
  const std::uint64_t count = BinomialCoefficient(n, k);
  if (count > enumeration_cap) {
    throw RefusalError("BruteForceOptimum: C(" + std::to_string(n) + ", " +
                       std::to_string(k) + ") = " + std::to_string(count) +
                       " subsets exceeds the enumeration cap of " +
                       std::to_string(enumeration_cap));
  }
  const Vector sum = BatchSum(features);

  BruteForceResult best;
  best.value.r = -1.0;
  std::vector<std::size_t> combo(k);
  std::iota(combo.begin(), combo.end(), std::size_t{0});
  while (true) {
    const ObjectiveValue v = ObjectiveFromBasis(BasisOfSubset(features, combo, eps), sum);
    ++best.subsets_evaluated;
    if (v.r > best.value.r) {
      best.value = v;
      best.indices = combo;
    }
    // Advance to the next combination in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && combo[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++combo[pos - 1];
    for (std::size_t i = pos; i < k; ++i) combo[i] = combo[i - 1] + 1;
  }
  return best;
}

}  // namespace divbs
