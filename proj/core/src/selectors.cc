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

#include "divbs/selectors.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "divbs/error.h"

namespace divbs {
namespace {

using Clock = std::chrono::steady_clock;

// Seed offset so padding draws are independent from the selector's own stream.
constexpr std::uint64_t kPadStreamSalt = 0x9e3779b97f4a7c15ULL;

void CheckBudget(const FeatureMatrix& features, const SelectionConfig& cfg) {
  if (cfg.budget == 0) throw ContractViolation("budget must be at least 1");
  if (cfg.budget > features.n_rows()) {
    throw ContractViolation("budget " + std::to_string(cfg.budget) + " exceeds the " +
                            std::to_string(features.n_rows()) + " available rows");
  }
}

// Holds the matrix the selector actually works on: the caller's, or an owned
// row-normalized copy.
class WorkingFeatures {
 public:
  WorkingFeatures(const FeatureMatrix& features, bool normalize) {
    if (normalize) {
      owned_ = std::make_unique<FeatureMatrix>(features.RowNormalized());
      view_ = owned_.get();
    } else {
      view_ = &features;
    }
  }
  const FeatureMatrix& get() const { return *view_; }

 private:
  std::unique_ptr<FeatureMatrix> owned_;
  const FeatureMatrix* view_;
};

// Pads, evaluates the objective on the non-padded prefix and stamps the time.
SelectionResult Finish(SelectionResult result, const FeatureMatrix& features,
                       const SelectionConfig& cfg, Clock::time_point start) {
  result.padded.assign(result.indices.size(), false);
  result = PadSelection(std::move(result), features, cfg);
  result.wall_time_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const std::size_t kept = result.num_selected();
  result.objective = EvaluateSubset(
      features, std::span<const std::size_t>(result.indices.data(), kept), cfg.eps);
  return result;
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

std::size_t SelectionResult::num_selected() const {
  return static_cast<std::size_t>(std::count(padded.begin(), padded.end(), false));
}

SelectionResult SelectGreedy(const FeatureMatrix& input, const SelectionConfig& cfg) {
  CheckBudget(input, cfg);
  const auto start = Clock::now();
  const WorkingFeatures working(input, cfg.normalize_features);
  const FeatureMatrix& features = working.get();
  const std::size_t n = features.n_rows();
  const std::size_t dim = features.dim();

  const Vector sum = BatchSum(features);
  // residuals[d] is row d with the selected basis removed, one basis vector at
  // a time in selection order, so it matches OrthonormalBasis::Residual.
  std::vector<double> residuals(features.values().begin(), features.values().end());
  std::vector<double> source_norm(n);
  std::vector<bool> candidate(n, true);
  for (std::size_t d = 0; d < n; ++d) source_norm[d] = Norm(features.row(d));

  OrthonormalBasis basis(dim, cfg.eps);
  SelectionResult result;
  Vector unit(dim);
  Vector best_unit(dim);
  while (result.indices.size() < cfg.budget && basis.size() < dim) {
    std::size_t best = n;
    double best_score = -1.0;
    for (std::size_t d = 0; d < n; ++d) {
      if (!candidate[d]) continue;
      std::span<const double> res(residuals.data() + d * dim, dim);
      const double res_norm = Norm(res);
      if (IsDependent(res_norm, source_norm[d], cfg.eps)) {
        candidate[d] = false;
        continue;
      }
      for (std::size_t j = 0; j < dim; ++j) unit[j] = res[j] / res_norm;
      const double score = std::abs(Dot(unit, sum));
      if (score > best_score) {
        best_score = score;
        best = d;
        best_unit.swap(unit);
      }
    }
    if (best == n) break;

    result.indices.push_back(best);
    result.step_scores.push_back(best_score);
    candidate[best] = false;
    for (std::size_t d = 0; d < n; ++d) {
      if (!candidate[d]) continue;
      std::span<double> res(residuals.data() + d * dim, dim);
      SubtractScaled(res, Dot(best_unit, res), best_unit);
    }
    basis.AppendUnchecked(best_unit);
  }
  return Finish(std::move(result), features, cfg, start);
}

SelectionResult SelectDivBS(const FeatureMatrix& input, const SelectionConfig& cfg) {
  CheckBudget(input, cfg);
  const auto start = Clock::now();
  const WorkingFeatures working(input, cfg.normalize_features);
  const FeatureMatrix& features = working.get();
  const std::size_t n = features.n_rows();

  Vector sum = BatchSum(features);
  const double initial_norm = Norm(sum);
  std::vector<bool> candidate(n, true);
  OrthonormalBasis basis(features.dim(), cfg.eps);
  SelectionResult result;

  while (result.indices.size() < cfg.budget) {
    if (IsDependent(Norm(sum), initial_norm, cfg.eps)) break;
    const Vector scores = RowDots(features, sum);
    std::optional<Vector> unit;
    std::size_t pick = n;
    while (!unit) {
      pick = n;
      double best = -1.0;
      for (std::size_t d = 0; d < n; ++d) {
        if (candidate[d] && std::abs(scores[d]) > best) {
          best = std::abs(scores[d]);
          pick = d;
        }
      }
      if (pick == n) break;
      unit = basis.Extend(features.row(pick));
      if (!unit) candidate[pick] = false;
    }
    if (!unit) break;

    result.indices.push_back(pick);
    result.step_scores.push_back(std::abs(scores[pick]));
    candidate[pick] = false;
    SubtractScaled(sum, Dot(*unit, sum), *unit);
  }
  return Finish(std::move(result), features, cfg, start);
}

SelectionResult SelectUniform(const FeatureMatrix& features, const SelectionConfig& cfg) {
  CheckBudget(features, cfg);
  const auto start = Clock::now();
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> pool(features.n_rows());
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < cfg.budget; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  SelectionResult result;
  result.indices.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(cfg.budget));
  return Finish(std::move(result), features, cfg, start);
}

SelectionResult SelectTopScore(const FeatureMatrix& features, std::span<const double> scores,
                               const SelectionConfig& cfg) {
  CheckBudget(features, cfg);
  if (scores.size() != features.n_rows()) {
    throw ContractViolation("scores has length " + std::to_string(scores.size()) +
                            ", expected " + std::to_string(features.n_rows()));
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) {
      throw ContractViolation("score at row " + std::to_string(i) + " is NaN");
    }
  }
  const auto start = Clock::now();
  std::vector<std::size_t> order(features.n_rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  SelectionResult result;
  result.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cfg.budget));
  result.step_scores.reserve(cfg.budget);
  for (std::size_t idx : result.indices) result.step_scores.push_back(scores[idx]);
  return Finish(std::move(result), features, cfg, start);
}

std::vector<double> RowNorms(const FeatureMatrix& features) {
  std::vector<double> norms(features.n_rows());
  for (std::size_t i = 0; i < norms.size(); ++i) norms[i] = Norm(features.row(i));
  return norms;
}

SelectionResult SelectKMeansPP(const FeatureMatrix& features, const SelectionConfig& cfg) {
  CheckBudget(features, cfg);
  const auto start = Clock::now();
  const std::size_t n = features.n_rows();
  std::mt19937_64 rng(cfg.seed);
  std::vector<bool> chosen(n, false);
  std::vector<double> nearest(n, 0.0);
  SelectionResult result;

  auto take = [&](std::size_t idx, double score) {
    chosen[idx] = true;
    result.indices.push_back(idx);
    result.step_scores.push_back(score);
    for (std::size_t d = 0; d < n; ++d) {
      if (chosen[d]) {
        nearest[d] = 0.0;
        continue;
      }
      const double dist = SquaredDistance(features.row(d), features.row(idx));
      nearest[d] = result.indices.size() == 1 ? dist : std::min(nearest[d], dist);
    }
  };

  take(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng), 0.0);
  while (result.indices.size() < cfg.budget) {
    double total = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      if (!chosen[d]) total += nearest[d];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = std::uniform_real_distribution<double>(0.0, 1.0)(rng) * total;
      double cumulative = 0.0;
      for (std::size_t d = 0; d < n; ++d) {
        if (chosen[d] || nearest[d] <= 0.0) continue;
        cumulative += nearest[d];
        pick = d;
        if (cumulative > target) break;
      }
    } else {
      std::vector<std::size_t> remaining;
      for (std::size_t d = 0; d < n; ++d) {
        if (!chosen[d]) remaining.push_back(d);
      }
      pick = remaining[std::uniform_int_distribution<std::size_t>(0, remaining.size() - 1)(rng)];
    }
    take(pick, nearest[pick]);
  }
  return Finish(std::move(result), features, cfg, start);
}

SelectionResult PadSelection(SelectionResult result, const FeatureMatrix& features,
                             const SelectionConfig& cfg) {
  if (result.padded.size() != result.indices.size()) {
    result.padded.resize(result.indices.size(), false);
  }
  if (cfg.pad_policy == PadPolicy::kNone || result.indices.size() >= cfg.budget) {
    return result;
  }
  std::vector<bool> taken(features.n_rows(), false);
  for (std::size_t idx : result.indices) {
    if (idx >= features.n_rows() || taken[idx]) {
      throw ContractViolation("PadSelection: selection has an invalid or duplicate index " +
                              std::to_string(idx));
    }
    taken[idx] = true;
  }
  std::vector<std::size_t> pool;
  for (std::size_t d = 0; d < features.n_rows(); ++d) {
    if (!taken[d]) pool.push_back(d);
  }
  const std::size_t need = std::min(cfg.budget - result.indices.size(), pool.size());
  std::mt19937_64 rng(cfg.seed ^ kPadStreamSalt);
  for (std::size_t i = 0; i < need; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    result.indices.push_back(pool[i]);
    result.padded.push_back(true);
  }
  return result;
}

std::size_t BudgetFromRatio(double ratio, std::size_t n) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw ContractViolation("budget ratio must lie in (0, 1], got " + std::to_string(ratio));
  }
  const auto budget = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
  return std::clamp<std::size_t>(budget, 1, n);
}

std::optional<Strategy> ParseStrategy(std::string_view name) {
  if (name == "uniform") return Strategy::kUniform;
  if (name == "top_score") return Strategy::kTopScore;
  if (name == "grad_norm") return Strategy::kGradNorm;
  if (name == "greedy") return Strategy::kGreedy;
  if (name == "divbs") return Strategy::kDivBS;
  if (name == "kmeanspp") return Strategy::kKMeansPP;
  return std::nullopt;
}

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kUniform: return "uniform";
    case Strategy::kTopScore: return "top_score";
    case Strategy::kGradNorm: return "grad_norm";
    case Strategy::kGreedy: return "greedy";
    case Strategy::kDivBS: return "divbs";
    case Strategy::kKMeansPP: return "kmeanspp";
  }
  return "unknown";
}

bool StrategyNeedsScores(Strategy s) { return s == Strategy::kTopScore; }

SelectionResult Select(Strategy strategy, const FeatureMatrix& features,
                       const SelectionConfig& cfg,
                       std::optional<std::span<const double>> scores) {
  switch (strategy) {
    case Strategy::kUniform: return SelectUniform(features, cfg);
    case Strategy::kTopScore:
      if (!scores) throw ContractViolation("top_score selection requires scores");
      return SelectTopScore(features, *scores, cfg);
    case Strategy::kGradNorm: {
      const std::vector<double> norms = RowNorms(features);
      return SelectTopScore(features, norms, cfg);
    }
    case Strategy::kGreedy: return SelectGreedy(features, cfg);
    case Strategy::kDivBS: return SelectDivBS(features, cfg);
    case Strategy::kKMeansPP: return SelectKMeansPP(features, cfg);
  }
  throw ContractViolation("unknown strategy");
}

}  // namespace divbs
