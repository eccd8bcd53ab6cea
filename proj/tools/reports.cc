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

#include "reports.h"

#include <string>

namespace divbs::cli {

using nlohmann::json;

json SelectionToJson(const SelectionResult& result) {
  json padded = json::array();
  for (bool p : result.padded) padded.push_back(p);
  return json{
      {"indices", result.indices},
      {"padded", padded},
      {"n_selected", result.num_selected()},
      {"r", result.objective.r},
      {"r_prime", result.objective.r_prime},
      {"basis_size", result.objective.basis_size},
      {"step_scores", result.step_scores},
      {"wall_time_seconds", result.wall_time_seconds},
  };
}

json DiversityToJson(const DiversityReport& report) {
  json knn = json::object();
  for (const auto& [k, v] : report.knn_mean_cos_dist) knn[std::to_string(k)] = v;
  json groups = json::object();
  for (const auto& [g, v] : report.group_proportions) groups[std::to_string(g)] = v;
  return json{
      {"knn_mean_cos_dist", knn},
      {"group_proportions", groups},
      {"selection_rank", report.selection_rank},
      {"n_selected", report.n_selected},
  };
}

json ToyReportToJson(const toy::ToyRunReport& report, const toy::ToyRunConfig& cfg) {
  json padded = json::array();
  for (bool p : report.final_padded) padded.push_back(p);
  return json{
      {"strategy", toy::ToyStrategyName(cfg.strategy)},
      {"seed", cfg.seed},
      {"epochs", cfg.epochs},
      {"budget_ratio", cfg.budget_ratio},
      {"budget", report.budget},
      {"n_rows", report.inputs.n_rows()},
      {"epoch_accuracy", report.epoch_accuracy},
      {"epoch_loss", report.epoch_loss},
      {"final_selected", report.final_selected},
      {"final_padded", padded},
      {"cluster_counts", report.cluster_counts},
      {"diversity", DiversityToJson(report.diversity)},
  };
}

}  // namespace divbs::cli
