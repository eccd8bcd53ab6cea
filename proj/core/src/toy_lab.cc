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

#include "divbs/toy_lab.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "divbs/error.h"

namespace divbs::toy {
namespace {

// SplitMix64 finalizer; derives independent streams from one run seed.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void CheckLabels(std::size_t n, std::span<const std::int32_t> labels, std::size_t classes) {
  if (labels.size() != n) {
    throw ContractViolation("expected " + std::to_string(n) + " labels, got " +
                            std::to_string(labels.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= classes) {
      throw ContractViolation("label " + std::to_string(labels[i]) + " at row " +
                              std::to_string(i) + " is not a valid class");
    }
  }
}

}  // namespace

FeatureMatrix GenerateToyDataset(const ToyDatasetSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> values;
  std::vector<std::int32_t> labels;
  for (std::size_t c = 0; c < kNumClusters; ++c) {
    for (std::size_t i = 0; i < spec.counts[c]; ++i) {
      values.push_back(spec.means[c][0] + spec.stddev * gauss(rng));
      values.push_back(spec.means[c][1] + spec.stddev * gauss(rng));
      labels.push_back(static_cast<std::int32_t>(c));
    }
  }
  const std::size_t n = labels.size();
  return FeatureMatrix(n, 2, std::move(values), std::move(labels));
}

MlpParameters::MlpParameters(MlpShape shape)
    : shape_(shape), data_(shape.parameter_count(), 0.0) {
  if (shape.input == 0 || shape.hidden == 0 || shape.classes == 0) {
    throw ContractViolation("MlpShape dimensions must be positive");
  }
}

MlpState InitMlp(const MlpShape& shape, std::uint64_t seed, AdamConfig adam) {
  MlpState state{MlpParameters(shape), MlpParameters(shape), MlpParameters(shape), 0, adam};
  std::mt19937_64 rng(seed);
  auto fill = [&](std::span<double> block, std::size_t fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& x : block) x = dist(rng);
  };
  fill(state.params.w1(), shape.input);
  fill(state.params.b1(), shape.input);
  fill(state.params.w2(), shape.hidden);
  fill(state.params.b2(), shape.hidden);
  return state;
}

ForwardPass Forward(const MlpParameters& params, const FeatureMatrix& inputs) {
  const MlpShape& s = params.shape();
  if (inputs.dim() != s.input) {
    throw ContractViolation("Forward: inputs have dim " + std::to_string(inputs.dim()) +
                            ", model expects " + std::to_string(s.input));
  }
  const std::size_t n = inputs.n_rows();
  ForwardPass fp;
  fp.n = n;
  fp.pre_activation.resize(n * s.hidden);
  fp.hidden.resize(n * s.hidden);
  fp.logits.resize(n * s.classes);
  fp.probabilities.resize(n * s.classes);
  const auto w1 = params.w1();
  const auto b1 = params.b1();
  const auto w2 = params.w2();
  const auto b2 = params.b2();
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = inputs.row(i);
    double* pre = fp.pre_activation.data() + i * s.hidden;
    double* hid = fp.hidden.data() + i * s.hidden;
    for (std::size_t h = 0; h < s.hidden; ++h) {
      double z = b1[h];
      for (std::size_t j = 0; j < s.input; ++j) z += w1[h * s.input + j] * x[j];
      pre[h] = z;
      hid[h] = z > 0.0 ? z : 0.0;
    }
    double* logit = fp.logits.data() + i * s.classes;
    double* prob = fp.probabilities.data() + i * s.classes;
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < s.classes; ++c) {
      double z = b2[c];
      for (std::size_t h = 0; h < s.hidden; ++h) z += w2[c * s.hidden + h] * hid[h];
      logit[c] = z;
      max_logit = std::max(max_logit, z);
    }
    double total = 0.0;
    for (std::size_t c = 0; c < s.classes; ++c) {
      prob[c] = std::exp(logit[c] - max_logit);
      total += prob[c];
    }
    for (std::size_t c = 0; c < s.classes; ++c) prob[c] /= total;
  }
  return fp;
}

std::vector<double> PerSampleLoss(const ForwardPass& fp, std::span<const std::int32_t> labels) {
  const std::size_t classes = fp.n == 0 ? 0 : fp.logits.size() / fp.n;
  CheckLabels(fp.n, labels, classes);
  std::vector<double> loss(fp.n);
  for (std::size_t i = 0; i < fp.n; ++i) {
    const double* z = fp.logits.data() + i * classes;
    const double m = *std::max_element(z, z + classes);
    double total = 0.0;
    for (std::size_t c = 0; c < classes; ++c) total += std::exp(z[c] - m);
    loss[i] = std::max(0.0, m + std::log(total) - z[labels[i]]);
  }
  return loss;
}

double Accuracy(const ForwardPass& fp, std::span<const std::int32_t> labels) {
  const std::size_t classes = fp.n == 0 ? 0 : fp.logits.size() / fp.n;
  CheckLabels(fp.n, labels, classes);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < fp.n; ++i) {
    const double* z = fp.logits.data() + i * classes;
    const auto argmax = static_cast<std::int32_t>(std::max_element(z, z + classes) - z);
    if (argmax == labels[i]) ++correct;
  }
  return fp.n == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(fp.n);
}

FeatureMatrix LastLayerGradientFeatures(const ForwardPass& fp, std::span<const std::int32_t> labels,
                                        const MlpShape& shape) {
  CheckLabels(fp.n, labels, shape.classes);
  const std::size_t dim = shape.last_layer_dim();
  std::vector<double> values(fp.n * dim);
  for (std::size_t i = 0; i < fp.n; ++i) {
    const double* p = fp.probabilities.data() + i * shape.classes;
    const double* hid = fp.hidden.data() + i * shape.hidden;
    double* out = values.data() + i * dim;
    for (std::size_t c = 0; c < shape.classes; ++c) {
      const double delta = p[c] - (static_cast<std::int32_t>(c) == labels[i] ? 1.0 : 0.0);
      for (std::size_t h = 0; h < shape.hidden; ++h) out[c * shape.hidden + h] = delta * hid[h];
      out[shape.classes * shape.hidden + c] = delta;
    }
  }
  return FeatureMatrix(fp.n, dim, std::move(values));
}

FeatureMatrix LastLayerGradientFeatures(const MlpParameters& params, const FeatureMatrix& inputs,
                                        std::span<const std::int32_t> labels) {
  return LastLayerGradientFeatures(Forward(params, inputs), labels, params.shape());
}

MlpParameters MeanLossGradient(const MlpParameters& params, const FeatureMatrix& inputs,
                               const ForwardPass& fp, std::span<const std::int32_t> labels,
                               std::span<const std::size_t> subset) {
  const MlpShape& s = params.shape();
  CheckLabels(fp.n, labels, s.classes);
  std::vector<std::size_t> order(subset.begin(), subset.end());
  std::sort(order.begin(), order.end());
  MlpParameters grad(s);
  if (order.empty()) return grad;
  const double scale = 1.0 / static_cast<double>(order.size());
  auto gw1 = grad.w1();
  auto gb1 = grad.b1();
  auto gw2 = grad.w2();
  auto gb2 = grad.b2();
  const auto w2 = params.w2();
  std::vector<double> delta(s.classes);
  std::vector<double> back(s.hidden);
  for (std::size_t i : order) {
    if (i >= fp.n) throw ContractViolation("MeanLossGradient: index out of range");
    const double* p = fp.probabilities.data() + i * s.classes;
    const double* hid = fp.hidden.data() + i * s.hidden;
    const double* pre = fp.pre_activation.data() + i * s.hidden;
    const auto x = inputs.row(i);
    for (std::size_t c = 0; c < s.classes; ++c) {
      delta[c] = scale * (p[c] - (static_cast<std::int32_t>(c) == labels[i] ? 1.0 : 0.0));
      for (std::size_t h = 0; h < s.hidden; ++h) gw2[c * s.hidden + h] += delta[c] * hid[h];
      gb2[c] += delta[c];
    }
    for (std::size_t h = 0; h < s.hidden; ++h) {
      double acc = 0.0;
      for (std::size_t c = 0; c < s.classes; ++c) acc += w2[c * s.hidden + h] * delta[c];
      back[h] = pre[h] > 0.0 ? acc : 0.0;
      for (std::size_t j = 0; j < s.input; ++j) gw1[h * s.input + j] += back[h] * x[j];
      gb1[h] += back[h];
    }
  }
  return grad;
}

MlpState AdamStep(MlpState model, const MlpParameters& gradient) {
  if (!(gradient.shape() == model.params.shape())) {
    throw ContractViolation("AdamStep: gradient shape does not match the model");
  }
  ++model.step;
  const AdamConfig& a = model.adam;
  const double t = static_cast<double>(model.step);
  const double correction1 = 1.0 - std::pow(a.beta1, t);
  const double correction2 = 1.0 - std::pow(a.beta2, t);
  auto p = model.params.flat();
  auto m = model.first_moment.flat();
  auto v = model.second_moment.flat();
  const auto g = gradient.flat();
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = a.beta1 * m[i] + (1.0 - a.beta1) * g[i];
    v[i] = a.beta2 * v[i] + (1.0 - a.beta2) * g[i] * g[i];
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    p[i] -= a.learning_rate * m_hat / (std::sqrt(v_hat) + a.epsilon);
  }
  return model;
}

std::optional<ToyStrategy> ParseToyStrategy(std::string_view name) {
  if (name == "uniform") return ToyStrategy::kUniform;
  if (name == "top_loss") return ToyStrategy::kTopLoss;
  if (name == "greedy") return ToyStrategy::kGreedy;
  if (name == "divbs") return ToyStrategy::kDivBS;
  if (name == "kmeanspp") return ToyStrategy::kKMeansPP;
  return std::nullopt;
}

std::string_view ToyStrategyName(ToyStrategy s) {
  switch (s) {
    case ToyStrategy::kUniform: return "uniform";
    case ToyStrategy::kTopLoss: return "top_loss";
    case ToyStrategy::kGreedy: return "greedy";
    case ToyStrategy::kDivBS: return "divbs";
    case ToyStrategy::kKMeansPP: return "kmeanspp";
  }
  return "unknown";
}

ToyRunReport RunToyExperiment(const ToyRunConfig& cfg) {
  if (cfg.epochs == 0) throw ContractViolation("RunToyExperiment: epochs must be at least 1");
  ToyDatasetSpec spec;
  spec.counts = cfg.counts;
  spec.seed = MixSeed(cfg.seed, 0);
  ToyRunReport report;
  report.inputs = GenerateToyDataset(spec);
  const FeatureMatrix& data = report.inputs;
  const std::vector<std::int32_t>& labels = *data.row_labels();
  const MlpShape shape{2, cfg.hidden, kNumClusters};
  MlpState model = InitMlp(shape, MixSeed(cfg.seed, 1));
  report.budget = BudgetFromRatio(cfg.budget_ratio, data.n_rows());

  const bool uses_gradients = cfg.strategy == ToyStrategy::kGreedy ||
                              cfg.strategy == ToyStrategy::kDivBS ||
                              cfg.strategy == ToyStrategy::kKMeansPP;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const bool last = epoch + 1 == cfg.epochs;
    const ForwardPass fp = Forward(model.params, data);
    SelectionConfig sel_cfg;
    sel_cfg.budget = report.budget;
    sel_cfg.eps = cfg.eps;
    sel_cfg.pad_policy = cfg.pad_policy;
    sel_cfg.seed = MixSeed(cfg.seed, 1000 + epoch);

    std::optional<FeatureMatrix> grads;
    if (uses_gradients || last) grads = LastLayerGradientFeatures(fp, labels, shape);

    SelectionResult sel;
    switch (cfg.strategy) {
      case ToyStrategy::kUniform: sel = SelectUniform(data, sel_cfg); break;
      case ToyStrategy::kTopLoss: {
        const std::vector<double> losses = PerSampleLoss(fp, labels);
        sel = SelectTopScore(data, losses, sel_cfg);
        break;
      }
      case ToyStrategy::kGreedy: sel = SelectGreedy(*grads, sel_cfg); break;
      case ToyStrategy::kDivBS: sel = SelectDivBS(*grads, sel_cfg); break;
      case ToyStrategy::kKMeansPP: sel = SelectKMeansPP(*grads, sel_cfg); break;
    }

    const MlpParameters grad = MeanLossGradient(model.params, data, fp, labels, sel.indices);
    model = AdamStep(std::move(model), grad);

    const ForwardPass after = Forward(model.params, data);
    report.epoch_accuracy.push_back(Accuracy(after, labels));
    const std::vector<double> losses = PerSampleLoss(after, labels);
    double total = 0.0;
    for (double l : losses) total += l;
    report.epoch_loss.push_back(total / static_cast<double>(losses.size()));

    if (last) {
      report.final_selected = sel.indices;
      report.final_padded = sel.padded;
      report.cluster_counts.fill(0);
      for (std::size_t idx : sel.indices) ++report.cluster_counts[labels[idx]];
      report.diversity =
          BuildDiversityReport(*grads, sel.indices, cfg.knn_ks, &labels, 1, cfg.eps);
    }
  }
  report.final_model = std::move(model);
  return report;
}

}  // namespace divbs::toy
