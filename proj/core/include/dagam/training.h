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

#ifndef DAGAM_TRAINING_H_
#define DAGAM_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dagam/model.h"
#include "dagam/signal.h"

namespace dagam {

enum class LambdaMode {
  kConstant,  // lambda fixed for the whole run
  kSchedule,  // lambda * (2 / (1 + exp(-10 p)) - 1) over training progress p
  kOff,       // domain head detached, no domain loss
  kJoint,     // domain loss without gradient reversal
};

enum class EmotionLossKind { kKl, kCrossEntropy };

struct TrainConfig {
  ModelConfig model;
  double learning_rate = 1e-3;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  LambdaMode lambda_mode = LambdaMode::kConstant;
  double lambda = 1.0;
  EmotionLossKind emotion_loss = EmotionLossKind::kKl;
  std::uint64_t seed = 0;
};

double scheduled_lambda(double progress);

struct EpochRecord {
  std::size_t epoch = 0;
  double emotion_loss = 0.0;
  double domain_loss = 0.0;
  double total_loss = 0.0;
  double source_accuracy = 0.0;
  double lambda = 0.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochRecord> history;
};

// Trains on labelled source graphs and unlabelled target graphs. Target
// samples are passed as bare feature matrices, so their labels cannot reach
// any loss. Each epoch shuffles both domains, walks the source set in
// mini-batches (the target set is cycled alongside), and takes one Adam step
// per batch on L_y + L_d.
//
// Throws TrainingDivergenceError when a loss becomes non-finite.
TrainResult train_fold(std::span<const FeatureSample> source,
                       std::span<const Matrix> target, const GraphContext& graph,
                       const TrainConfig& config);

// Same as above but starting from the given parameters.
TrainResult train_fold(ModelParams initial, std::span<const FeatureSample> source,
                       std::span<const Matrix> target, const GraphContext& graph,
                       const TrainConfig& config);

// Argmax emotion class per sample.
std::vector<int> predict(const ModelParams& params, const GraphContext& graph,
                         std::span<const Matrix* const> samples);

}  // namespace dagam

#endif  // DAGAM_TRAINING_H_
