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

#include "dagam/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dagam/adam.h"
#include "dagam/errors.h"
#include "dagam/losses.h"
#include "dagam/ops.h"
#include "dagam/random.h"

namespace dagam {
namespace {

bool all_finite(const Tensor& t) {
  for (double v : t.data()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

constexpr std::uint64_t kShuffleStream = 0x9e3779b97f4a7c15ULL;

std::size_t argmax_row(const Tensor& probs, std::size_t row) {
  const std::size_t c = probs.cols();
  std::size_t best = 0;
  for (std::size_t j = 1; j < c; ++j) {
    if (probs.at(row, j) > probs.at(row, best)) best = j;
  }
  return best;
}

std::vector<std::size_t> range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> out(end - begin);
  std::iota(out.begin(), out.end(), begin);
  return out;
}

}  // namespace

double scheduled_lambda(double progress) {
  return 2.0 / (1.0 + std::exp(-10.0 * progress)) - 1.0;
}

TrainResult train_fold(std::span<const FeatureSample> source, std::span<const Matrix> target,
                       const GraphContext& graph, const TrainConfig& config) {
  return train_fold(ModelParams::initialize(config.model, config.seed), source, target, graph,
                    config);
}

TrainResult train_fold(ModelParams initial, std::span<const FeatureSample> source,
                       std::span<const Matrix> target, const GraphContext& graph,
                       const TrainConfig& config) {
  if (source.empty()) throw DataError("training needs at least one source sample");
  if (config.batch_size == 0) throw ConfigError("batch size must be positive");
  if (!(config.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  const bool adversarial = config.lambda_mode != LambdaMode::kOff;
  if (adversarial && target.empty()) {
    throw DataError("domain adversarial training needs target samples");
  }

  TrainResult result{std::move(initial), {}};
  std::vector<Tensor> params = result.params.tensors();
  AdamState adam = make_adam_state(params);
  Rng rng(config.seed ^ kShuffleStream);

  std::vector<std::size_t> source_order = range(0, source.size());
  std::vector<std::size_t> target_order = range(0, target.size());
  const std::size_t steps = (source.size() + config.batch_size - 1) / config.batch_size;
  const std::size_t classes = config.model.classes;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span(source_order));
    rng.shuffle(std::span(target_order));
    EpochRecord record;
    record.epoch = epoch;
    std::size_t correct = 0;
    std::size_t target_cursor = 0;
    double lambda_sum = 0.0;

    for (std::size_t step = 0; step < steps; ++step) {
      const std::size_t begin = step * config.batch_size;
      const std::size_t end = std::min(begin + config.batch_size, source.size());
      std::vector<const Matrix*> batch;
      std::vector<int> labels;
      for (std::size_t i = begin; i < end; ++i) {
        batch.push_back(&source[source_order[i]].features);
        labels.push_back(source[source_order[i]].label);
      }
      const std::size_t n_source = batch.size();
      if (adversarial) {
        const std::size_t n_target = std::min(config.batch_size, target.size());
        for (std::size_t i = 0; i < n_target; ++i) {
          batch.push_back(&target[target_order[target_cursor]]);
          target_cursor = (target_cursor + 1) % target.size();
        }
      }

      double lambda = 0.0;
      ForwardOptions options;
      switch (config.lambda_mode) {
        case LambdaMode::kConstant:
          lambda = config.lambda;
          options.domain = DomainMode::kReversed;
          break;
        case LambdaMode::kSchedule: {
          const double progress = static_cast<double>(epoch * steps + step) /
                                  static_cast<double>(config.epochs * steps);
          lambda = config.lambda * scheduled_lambda(progress);
          options.domain = DomainMode::kReversed;
          break;
        }
        case LambdaMode::kOff:
          options.domain = DomainMode::kOff;
          break;
        case LambdaMode::kJoint:
          options.domain = DomainMode::kJoint;
          break;
      }
      options.lambda = lambda;
      lambda_sum += lambda;

      Tape tape;
      ForwardResult out = forward(tape, result.params, graph, batch, options);
      if (!all_finite(out.emotion_probs) || (out.domain_probs && !all_finite(*out.domain_probs))) {
        throw TrainingDivergenceError(static_cast<int>(epoch),
                                      "non-finite network output in epoch " + std::to_string(epoch));
      }
      const auto source_rows = range(0, n_source);
      Tensor emotion_probs = n_source == batch.size()
                                 ? out.emotion_probs
                                 : ops::gather_rows(tape, out.emotion_probs, source_rows);
      Tensor target_dist = one_hot(labels, classes);
      Tensor emotion = config.emotion_loss == EmotionLossKind::kKl
                           ? emotion_loss_kl(tape, target_dist, emotion_probs)
                           : cross_entropy(tape, target_dist, emotion_probs);
      Tensor loss = emotion;
      double domain_value = 0.0;
      if (adversarial) {
        const auto target_rows = range(n_source, batch.size());
        Tensor domain = domain_loss(tape, ops::gather_rows(tape, *out.domain_probs, source_rows),
                                    ops::gather_rows(tape, *out.domain_probs, target_rows));
        domain_value = domain.item();
        loss = total_loss(tape, emotion, domain);
      }
      if (!std::isfinite(loss.item())) {
        throw TrainingDivergenceError(static_cast<int>(epoch),
                                      "non-finite loss in epoch " + std::to_string(epoch));
      }
      for (std::size_t i = 0; i < n_source; ++i) {
        if (static_cast<int>(argmax_row(emotion_probs, i)) == labels[i]) ++correct;
      }
      record.emotion_loss += emotion.item();
      record.domain_loss += domain_value;
      record.total_loss += loss.item();

      tape.backward(loss);
      adam_step(params, adam, config.learning_rate);
      result.params.zero_grad();
    }
    const double denom = static_cast<double>(steps);
    record.emotion_loss /= denom;
    record.domain_loss /= denom;
    record.total_loss /= denom;
    record.lambda = lambda_sum / denom;
    record.source_accuracy = static_cast<double>(correct) / static_cast<double>(source.size());
    result.history.push_back(record);
  }
  return result;
}

std::vector<int> predict(const ModelParams& params, const GraphContext& graph,
                         std::span<const Matrix* const> samples) {
  std::vector<int> out;
  out.reserve(samples.size());
  constexpr std::size_t kChunk = 64;
  ForwardOptions options;
  options.domain = DomainMode::kOff;
  for (std::size_t begin = 0; begin < samples.size(); begin += kChunk) {
    const std::size_t end = std::min(begin + kChunk, samples.size());
    Tape tape(/*recording=*/false);
    ForwardResult r = forward(tape, params, graph, samples.subspan(begin, end - begin), options);
    for (std::size_t i = 0; i < end - begin; ++i) {
      out.push_back(static_cast<int>(argmax_row(r.emotion_probs, i)));
    }
  }
  return out;
}

}  // namespace dagam
