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

// Budgeted subset selectors. All of them return a SelectionResult whose
// `objective` is evaluated on the non-padded prefix of the selection.
//
// Ties in every argmax resolve to the lowest row index.

#ifndef DIVBS_SELECTORS_H_
#define DIVBS_SELECTORS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divbs/linalg.h"
#include "divbs/objective.h"

namespace divbs {

enum class PadPolicy { kNone, kUniformRandom };

struct SelectionConfig {
  std::size_t budget = 1;
  double eps = kDefaultEps;
  PadPolicy pad_policy = PadPolicy::kUniformRandom;
  std::uint64_t seed = 0;
  // Divide each feature row by its norm before selecting. The reported
  // objective is then measured on the normalized rows.
  bool normalize_features = false;
};

struct SelectionResult {
  std::vector<std::size_t> indices;
  std::vector<bool> padded;  // aligned with indices
  ObjectiveValue objective;
  std::vector<double> step_scores;
  double wall_time_seconds = 0.0;

  std::size_t num_selected() const;  // non-padded entries
};

// Algorithm with the exact greedy step: each remaining row is orthogonalized
// against the selected basis and normalized, and the row whose normalized
// residual has the largest |e . Sum| joins. Sum is the fixed full-batch sum.
// Rows that become dependent leave the candidate pool. Stops at the budget or
// when no independent row remains, then pads.
SelectionResult SelectGreedy(const FeatureMatrix& features, const SelectionConfig& cfg);

// Fast approximation of SelectGreedy that drops the residual normalization:
// pick argmax |g(d) . Sum| over remaining rows, orthogonalize only that row,
// then remove its new basis direction from the running Sum. Dependent argmax
// rows are excluded and the argmax is re-evaluated. Stops at the budget or
// when ||Sum|| falls to the eps threshold, then pads.
SelectionResult SelectDivBS(const FeatureMatrix& features, const SelectionConfig& cfg);

// Seeded uniform sample of `budget` rows without replacement.
SelectionResult SelectUniform(const FeatureMatrix& features, const SelectionConfig& cfg);

// The `budget` rows with the largest external scores (train loss, ...).
SelectionResult SelectTopScore(const FeatureMatrix& features, std::span<const double> scores,
                               const SelectionConfig& cfg);

// Per-row Euclidean norms, the score used by the gradient-norm baseline.
std::vector<double> RowNorms(const FeatureMatrix& features);

// k-means++ seeding. The first row is uniform; each later row is drawn with
// probability proportional to its squared distance to the nearest selected
// row. When every remaining distance is zero the draw is uniform over the
// unselected rows.
SelectionResult SelectKMeansPP(const FeatureMatrix& features, const SelectionConfig& cfg);

// Under kUniformRandom, tops `result` up to cfg.budget with seeded uniform
// draws from unselected rows, flagged as padded. kNone returns it unchanged.
SelectionResult PadSelection(SelectionResult result, const FeatureMatrix& features,
                             const SelectionConfig& cfg);

// floor(ratio * n) with a 1e-9 guard against representation error, at least
// 1. Throws ContractViolation unless 0 < ratio <= 1.
std::size_t BudgetFromRatio(double ratio, std::size_t n);

enum class Strategy { kUniform, kTopScore, kGradNorm, kGreedy, kDivBS, kKMeansPP };

std::optional<Strategy> ParseStrategy(std::string_view name);
std::string_view StrategyName(Strategy s);
bool StrategyNeedsScores(Strategy s);

// Dispatches to the selector for `strategy`. `scores` is required for
// kTopScore and ignored otherwise.
SelectionResult Select(Strategy strategy, const FeatureMatrix& features,
                       const SelectionConfig& cfg,
                       std::optional<std::span<const double>> scores = std::nullopt);

}  // namespace divbs

#endif  // DIVBS_SELECTORS_H_
