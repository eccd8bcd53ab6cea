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

#include "divbs/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "divbs/error.h"

namespace divbs {
namespace {

std::int32_t FloorDiv(std::int32_t a, std::int32_t b) {
  std::int32_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

double CosineDistance(std::span<const double> a, std::span<const double> b) {
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na == 0.0 || nb == 0.0) throw ContractViolation("CosineDistance: zero vector");
  return std::clamp(1.0 - Dot(a, b) / (na * nb), 0.0, 2.0);
}

std::map<std::size_t, double> KnnCosineDistance(const FeatureMatrix& features,
                                                std::span<const std::size_t> selected,
                                                std::span<const std::size_t> ks) {
  const std::size_t m = selected.size();
  if (m == 0) throw ContractViolation("KnnCosineDistance: empty selection");
  for (std::size_t k : ks) {
    if (k == 0 || k >= m) {
      throw ContractViolation("KnnCosineDistance: k = " + std::to_string(k) +
                              " must satisfy 1 <= k < " + std::to_string(m) +
                              " (selection size)");
    }
  }
  std::vector<double> norms(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (selected[i] >= features.n_rows()) {
      throw ContractViolation("KnnCosineDistance: index " + std::to_string(selected[i]) +
                              " out of range");
    }
    norms[i] = Norm(features.row(selected[i]));
    if (norms[i] == 0.0) {
      throw ContractViolation("KnnCosineDistance: selected row " +
                              std::to_string(selected[i]) + " is the zero vector");
    }
  }

  // Pairwise distances over the selection only.
  std::vector<double> dist(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double cos =
          Dot(features.row(selected[i]), features.row(selected[j])) / (norms[i] * norms[j]);
      dist[i * m + j] = dist[j * m + i] = std::clamp(1.0 - cos, 0.0, 2.0);
    }
  }

  std::map<std::size_t, double> sums;
  for (std::size_t k : ks) sums[k] = 0.0;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < m; ++i) {
    order.clear();
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) order.push_back(j);
    }
    // Neighbors ranked by distance, then by row index.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double da = dist[i * m + a];
      const double db = dist[i * m + b];
      if (da != db) return da < db;
      return selected[a] < selected[b];
    });
    for (auto& [k, total] : sums) {
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t) acc += dist[i * m + order[t]];
      total += acc / static_cast<double>(k);
    }
  }
  for (auto& [k, total] : sums) total /= static_cast<double>(m);
  return sums;
}

std::map<std::int32_t, double> GroupProportions(std::span<const std::int32_t> row_labels,
                                                std::span<const std::size_t> selected,
                                                std::int32_t group_width) {
  if (group_width < 1) throw ContractViolation("GroupProportions: group_width must be >= 1");
  std::map<std::int32_t, std::size_t> counts;
  for (std::size_t idx : selected) {
    if (idx >= row_labels.size()) {
      throw ContractViolation("GroupProportions: no label for row " + std::to_string(idx));
    }
    ++counts[FloorDiv(row_labels[idx], group_width)];
  }
  std::map<std::int32_t, double> out;
  for (const auto& [group, count] : counts) {
    out[group] = static_cast<double>(count) / static_cast<double>(selected.size());
  }
  return out;
}

std::size_t SelectionRank(const FeatureMatrix& features, std::span<const std::size_t> selected,
                          double eps) {
  OrthonormalBasis basis(features.dim(), eps);
  for (std::size_t idx : selected) {
    if (idx >= features.n_rows()) {
      throw ContractViolation("SelectionRank: index " + std::to_string(idx) + " out of range");
    }
    basis.Extend(features.row(idx));
  }
  return basis.size();
}

DiversityReport BuildDiversityReport(const FeatureMatrix& features,
                                     std::span<const std::size_t> selected,
                                     std::span<const std::size_t> ks,
                                     const std::vector<std::int32_t>* labels,
                                     std::int32_t group_width, double eps) {
  DiversityReport report;
  report.n_selected = selected.size();
  report.selection_rank = SelectionRank(features, selected, eps);
  std::vector<std::size_t> usable;
  for (std::size_t k : ks) {
    if (k >= 1 && k < selected.size()) usable.push_back(k);
  }
  if (!usable.empty()) report.knn_mean_cos_dist = KnnCosineDistance(features, selected, usable);
  if (labels == nullptr && features.row_labels()) labels = &*features.row_labels();
  if (labels != nullptr && !selected.empty()) {
    report.group_proportions = GroupProportions(*labels, selected, group_width);
  }
  return report;
}

}  // namespace divbs
