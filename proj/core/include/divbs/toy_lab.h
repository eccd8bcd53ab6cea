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

// Toy online-batch-selection experiment: an imbalanced four-cluster 2-D
// classification task, a 2 -> hidden -> 4 ReLU MLP, and Adam. Each epoch the
// whole dataset is one batch; a selector picks a sub-batch from the model's
// last-layer gradient features and one Adam step is taken on it.

#ifndef DIVBS_TOY_LAB_H_
#define DIVBS_TOY_LAB_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "divbs/linalg.h"
#include "divbs/metrics.h"
#include "divbs/selectors.h"

namespace divbs::toy {

inline constexpr std::size_t kNumClusters = 4;

struct ToyDatasetSpec {
  std::array<std::array<double, 2>, kNumClusters> means{{{0.0, 0.0}, {5.0, 0.0}, {0.0, 5.0}, {5.0, 5.0}}};
  std::array<std::size_t, kNumClusters> counts{1000, 300, 150, 20};
  double stddev = 1.0;  // per coordinate, independent
  std::uint64_t seed = 0;
};

// Rows are grouped by cluster in order; row_labels holds the cluster id 0-3.
FeatureMatrix GenerateToyDataset(const ToyDatasetSpec& spec);

struct MlpShape {
  std::size_t input = 2;
  std::size_t hidden = 100;
  std::size_t classes = kNumClusters;

  std::size_t parameter_count() const { return hidden * input + hidden + classes * hidden + classes; }
  // Dimension of a last-layer gradient feature: weights then bias.
  std::size_t last_layer_dim() const { return classes * hidden + classes; }
  friend bool operator==(const MlpShape&, const MlpShape&) = default;
};

// All parameters in one flat buffer laid out as w1 (hidden x input, row-major),
// b1, w2 (classes x hidden, row-major), b2. Also used for gradients and Adam
// moments.
class MlpParameters {
 public:
  explicit MlpParameters(MlpShape shape = {});

  const MlpShape& shape() const { return shape_; }
  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  std::span<double> w1() { return Slice(0, shape_.hidden * shape_.input); }
  std::span<double> b1() { return Slice(w1_end(), shape_.hidden); }
  std::span<double> w2() { return Slice(b1_end(), shape_.classes * shape_.hidden); }
  std::span<double> b2() { return Slice(w2_end(), shape_.classes); }
  std::span<const double> w1() const { return Slice(0, shape_.hidden * shape_.input); }
  std::span<const double> b1() const { return Slice(w1_end(), shape_.hidden); }
  std::span<const double> w2() const { return Slice(b1_end(), shape_.classes * shape_.hidden); }
  std::span<const double> b2() const { return Slice(w2_end(), shape_.classes); }

  friend bool operator==(const MlpParameters&, const MlpParameters&) = default;

 private:
  std::size_t w1_end() const { return shape_.hidden * shape_.input; }
  std::size_t b1_end() const { return w1_end() + shape_.hidden; }
  std::size_t w2_end() const { return b1_end() + shape_.classes * shape_.hidden; }
  std::span<double> Slice(std::size_t off, std::size_t len) { return {data_.data() + off, len}; }
  std::span<const double> Slice(std::size_t off, std::size_t len) const {
    return {data_.data() + off, len};
  }

  MlpShape shape_;
  std::vector<double> data_;
};

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  friend bool operator==(const AdamConfig&, const AdamConfig&) = default;
};

struct MlpState {
  MlpParameters params;
  MlpParameters first_moment;
  MlpParameters second_moment;
  std::uint64_t step = 0;
  AdamConfig adam;

  friend bool operator==(const MlpState&, const MlpState&) = default;
};

// Weights and biases drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)); zeroed
// moments.
MlpState InitMlp(const MlpShape& shape, std::uint64_t seed, AdamConfig adam = {});

struct ForwardPass {
  std::size_t n = 0;
  std::vector<double> pre_activation;  // n x hidden
  std::vector<double> hidden;          // n x hidden, ReLU(pre_activation)
  std::vector<double> logits;          // n x classes
  std::vector<double> probabilities;   // n x classes, softmax(logits)
};

ForwardPass Forward(const MlpParameters& params, const FeatureMatrix& inputs);

// -log p_y per sample, computed from the logits via log-sum-exp.
std::vector<double> PerSampleLoss(const ForwardPass& fp, std::span<const std::int32_t> labels);

double Accuracy(const ForwardPass& fp, std::span<const std::int32_t> labels);

// Per-sample cross-entropy gradient w.r.t. (w2, b2): the weight block is
// (p - onehot(y)) outer hidden, flattened row-major, followed by p - onehot(y).
FeatureMatrix LastLayerGradientFeatures(const ForwardPass& fp, std::span<const std::int32_t> labels,
                                        const MlpShape& shape);
FeatureMatrix LastLayerGradientFeatures(const MlpParameters& params, const FeatureMatrix& inputs,
                                        std::span<const std::int32_t> labels);

// Gradient of the mean loss over `subset`. Samples are accumulated in
// ascending index order regardless of the order of `subset`.
MlpParameters MeanLossGradient(const MlpParameters& params, const FeatureMatrix& inputs,
                               const ForwardPass& fp, std::span<const std::int32_t> labels,
                               std::span<const std::size_t> subset);

// Bias-corrected Adam update.
MlpState AdamStep(MlpState model, const MlpParameters& gradient);

enum class ToyStrategy { kUniform, kTopLoss, kGreedy, kDivBS, kKMeansPP };

std::optional<ToyStrategy> ParseToyStrategy(std::string_view name);
std::string_view ToyStrategyName(ToyStrategy s);

struct ToyRunConfig {
  ToyStrategy strategy = ToyStrategy::kDivBS;
  double budget_ratio = 0.1;
  std::size_t epochs = 100;
  std::uint64_t seed = 0;
  std::array<std::size_t, kNumClusters> counts{1000, 300, 150, 20};
  std::size_t hidden = 100;
  double eps = kDefaultEps;
  PadPolicy pad_policy = PadPolicy::kUniformRandom;
  std::vector<std::size_t> knn_ks{1, 3, 5, 7, 9};
};

struct ToyRunReport {
  std::size_t budget = 0;
  std::vector<double> epoch_accuracy;  // training accuracy after each step
  std::vector<double> epoch_loss;      // mean training loss after each step
  std::vector<std::size_t> final_selected;
  std::vector<bool> final_padded;
  std::array<std::size_t, kNumClusters> cluster_counts{};
  DiversityReport diversity;  // on the final epoch's last-layer gradients
  FeatureMatrix inputs{1, 1, {0.0}};  // the generated 2-D dataset with labels
  MlpState final_model;
};

ToyRunReport RunToyExperiment(const ToyRunConfig& cfg);

}  // namespace divbs::toy

#endif  // DIVBS_TOY_LAB_H_
