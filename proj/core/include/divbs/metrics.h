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

// Diversity diagnostics for a selected subset.

#ifndef DIVBS_METRICS_H_
#define DIVBS_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "divbs/linalg.h"

namespace divbs {

// 1 - a.b / (|a||b|), clamped to [0, 2]. Both vectors must be nonzero.
double CosineDistance(std::span<const double> a, std::span<const double> b);

// For each k: the mean over selected rows of the mean cosine distance to that
// row's k nearest other selected rows. Neighbor ties go to the lower index.
// Requires 1 <= k < |selected| and no zero rows among the selection.
std::map<std::size_t, double> KnnCosineDistance(const FeatureMatrix& features,
                                                std::span<const std::size_t> selected,
                                                std::span<const std::size_t> ks);

// Fraction of the selection falling in each group, where a row's group is
// floor(label / group_width). group_width = 10 reproduces "every ten classes".
std::map<std::int32_t, double> GroupProportions(std::span<const std::int32_t> row_labels,
                                                std::span<const std::size_t> selected,
                                                std::int32_t group_width = 1);

// Numerical rank of the selected rows under eps.
std::size_t SelectionRank(const FeatureMatrix& features, std::span<const std::size_t> selected,
                          double eps = kDefaultEps);

struct DiversityReport {
  std::map<std::size_t, double> knn_mean_cos_dist;
  std::map<std::int32_t, double> group_proportions;  // empty without labels
  std::size_t selection_rank = 0;
  std::size_t n_selected = 0;
};

// Group proportions use `labels` when given, else the matrix's own labels
// when present. ks that are not below |selected| are skipped.
DiversityReport BuildDiversityReport(const FeatureMatrix& features,
                                     std::span<const std::size_t> selected,
                                     std::span<const std::size_t> ks,
                                     const std::vector<std::int32_t>* labels = nullptr,
                                     std::int32_t group_width = 1, double eps = kDefaultEps);

}  // namespace divbs

#endif  // DIVBS_METRICS_H_
