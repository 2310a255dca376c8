/* Copyright 2026 The DAGAM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <benchmark/benchmark.h>

#include <vector>

#include "dagam/experiments.h"
#include "dagam/graph.h"
#include "dagam/model.h"
#include "dagam/ops.h"
#include "dagam/random.h"
#include "dagam/signal.h"
#include "dagam/training.h"

namespace dagam {
namespace {

Tensor random_matrix(Rng& rng, std::size_t r, std::size_t c, bool grad = false) {
  std::vector<double> v(r * c);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return Tensor::matrix(r, c, std::move(v), grad);
}

Matrix random_features(Rng& rng, std::size_t n, std::size_t f) {
  Matrix m(n, f);
  for (double& x : m.values) x = rng.uniform(-1.0, 1.0);
  return m;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const Tensor a = random_matrix(rng, n, n), b = random_matrix(rng, n, n);
  Tape tape(false);
  for (auto _ : state) benchmark::DoNotOptimize(ops::matmul(tape, a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(16)->Arg(62)->Arg(128);

GraphContext montage_graph() {
  return build_graph(standard_62_layout(), GraphConfig{});
}

ModelConfig bench_model() {
  ModelConfig m;
  m.in_features = 5;
  m.classes = 3;
  return m;
}

// One sample through the GCN stack, pooling, readout and both heads.
void BM_ForwardSample(benchmark::State& state) {
  const GraphContext g = montage_graph();
  const ModelParams p = ModelParams::initialize(bench_model(), 2);
  Rng rng(3);
  const Matrix x = random_features(rng, 62, 5);
  const Matrix* batch[] = {&x};
  for (auto _ : state) {
    Tape tape(false);
    benchmark::DoNotOptimize(forward(tape, p, g, batch, {}).emotion_probs);
  }
}
BENCHMARK(BM_ForwardSample);

void BM_ForwardBackwardBatch(benchmark::State& state) {
  const auto batch_size = static_cast<std::size_t>(state.range(0));
  const GraphContext g = montage_graph();
  ModelParams p = ModelParams::initialize(bench_model(), 2);
  Rng rng(3);
  std::vector<Matrix> xs;
  for (std::size_t i = 0; i < batch_size; ++i) xs.push_back(random_features(rng, 62, 5));
  std::vector<const Matrix*> batch;
  for (const Matrix& x : xs) batch.push_back(&x);
  for (auto _ : state) {
    Tape tape;
    ForwardResult r = forward(tape, p, g, batch, {});
    tape.backward(ops::sum_all(tape, ops::log(tape, r.emotion_probs)));
    p.zero_grad();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(batch_size));
}
BENCHMARK(BM_ForwardBackwardBatch)->Arg(8)->Arg(32);

void BM_BandIsolate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(band_isolate(x, 8.0, 14.0, 200.0));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_BandIsolate)->Arg(200)->Arg(2000)->Arg(20000);

// One epoch of adversarial training over 64 source and 32 target windows.
void BM_TrainEpoch(benchmark::State& state) {
  const GraphContext g = montage_graph();
  Rng rng(5);
  std::vector<FeatureSample> source;
  for (int i = 0; i < 64; ++i) source.push_back({random_features(rng, 62, 5), i % 3, "s", 0, i});
  std::vector<Matrix> target;
  for (int i = 0; i < 32; ++i) target.push_back(random_features(rng, 62, 5));
  TrainConfig c;
  c.model = bench_model();
  c.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train_fold(source, target, g, c).history);
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dagam

BENCHMARK_MAIN();
