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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "divbs/linalg.h"
#include "divbs/selectors.h"
#include "divbs/toy_lab.h"

namespace divbs {
namespace {

FeatureMatrix Gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n * d);
  for (double& x : v) x = g(rng);
  return FeatureMatrix(n, d, std::move(v));
}

template <SelectionResult (*Selector)(const FeatureMatrix&, const SelectionConfig&)>
void BM_Selector(benchmark::State& state) {
  const FeatureMatrix m = Gaussian(state.range(0), state.range(1), 7);
  SelectionConfig cfg;
  cfg.budget = state.range(2);
  cfg.pad_policy = PadPolicy::kNone;
  for (auto _ : state) benchmark::DoNotOptimize(Selector(m, cfg));
}

#define SELECTOR_ARGS Args({320, 512, 32})->Args({1470, 404, 147})->Unit(benchmark::kMillisecond)
BENCHMARK(BM_Selector<SelectGreedy>)->Name("greedy")->SELECTOR_ARGS;
BENCHMARK(BM_Selector<SelectDivBS>)->Name("divbs")->SELECTOR_ARGS;
BENCHMARK(BM_Selector<SelectKMeansPP>)->Name("kmeanspp")->SELECTOR_ARGS;
BENCHMARK(BM_Selector<SelectUniform>)->Name("uniform")->SELECTOR_ARGS;

void BM_RowDots(benchmark::State& state) {
  const FeatureMatrix m = Gaussian(state.range(0), state.range(1), 8);
  const Vector v = BatchSum(m);
  for (auto _ : state) benchmark::DoNotOptimize(RowDots(m, v));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_RowDots)->Args({320, 512})->Args({1470, 404});

void BM_ToyEpochFeatures(benchmark::State& state) {
  const FeatureMatrix data = toy::GenerateToyDataset({});
  const toy::MlpState model = toy::InitMlp(toy::MlpShape{}, 1);
  const std::vector<std::int32_t>& y = *data.row_labels();
  for (auto _ : state) {
    benchmark::DoNotOptimize(toy::LastLayerGradientFeatures(model.params, data, y));
  }
}
BENCHMARK(BM_ToyEpochFeatures)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace divbs

BENCHMARK_MAIN();
