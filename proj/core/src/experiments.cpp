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

#include "dagam/experiments.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "dagam/errors.h"

namespace dagam {

std::vector<double> ConfusionMatrix::normalized() const {
  std::vector<double> out(counts.size(), 0.0);
  for (std::size_t r = 0; r < classes; ++r) {
    std::uint64_t support = 0;
    for (std::size_t c = 0; c < classes; ++c) support += count(r, c);
    if (support == 0) continue;
    for (std::size_t c = 0; c < classes; ++c) {
      out[r * classes + c] = static_cast<double>(count(r, c)) / static_cast<double>(support);
    }
  }
  return out;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.classes != classes) throw DimensionError("confusion matrices differ in size");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

ConfusionMatrix confusion(std::span<const int> preds, std::span<const int> labels,
                          std::size_t classes) {
  if (preds.size() != labels.size()) {
    throw DataError("predictions and labels differ in length");
  }
  ConfusionMatrix m(classes);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const int p = preds[i], l = labels[i];
    if (p < 0 || l < 0 || static_cast<std::size_t>(p) >= classes ||
        static_cast<std::size_t>(l) >= classes) {
      throw DataError("class outside [0, " + std::to_string(classes) + ")");
    }
    m.counts[static_cast<std::size_t>(l) * classes + static_cast<std::size_t>(p)] += 1;
  }
  return m;
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) return {};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  // second pass removes the rounding error of the first
  double residual = 0.0;
  for (double v : values) residual += v - mean;
  mean += residual / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

GraphContext build_graph(const ElectrodeLayout& layout, const GraphConfig& config) {
  Adjacency adj = build_adjacency(layout, config.sigma);
  std::vector<ChannelPair> pairs;
  if (config.global_pairs) {
    pairs = *config.global_pairs;
  } else {
    const auto names = layout.names();
    auto present = [&](const std::string& n) {
      return std::find(names.begin(), names.end(), n) != names.end();
    };
    for (const auto& p : default_global_pairs()) {
      if (present(p.first) && present(p.second)) pairs.push_back(p);
    }
  }
  adj = apply_global_connections(std::move(adj), layout, pairs, config.global_weight);
  return GraphContext::from_adjacency(adj.matrix);
}

namespace {

FoldResult run_fold(const FeatureDataset& dataset, const ExperimentConfig& config,
                    const GraphContext& graph, std::size_t fold) {
  const std::string& target_id = dataset.subject_ids[fold];
  FoldResult result;
  result.target_subject = target_id;
  result.seed = fold_seed(config.train.seed, fold);
  for (const std::string& id : dataset.subject_ids) {
    if (id != target_id) result.source_subjects.push_back(id);
  }

  std::vector<FeatureSample> source;
  std::vector<Matrix> target_features;
  std::vector<int> target_labels;  // evaluation only
  for (const FeatureSample& s : dataset.samples) {
    if (s.subject == target_id) {
      target_features.push_back(s.features);
      target_labels.push_back(s.label);
    } else {
      source.push_back(s);
    }
  }

  TrainConfig train = config.train;
  train.seed = result.seed;
  train.model.in_features = dataset.bands.size();
  train.model.classes = dataset.classes();
  TrainResult trained = train_fold(source, target_features, graph, train);
  result.history = std::move(trained.history);

  std::vector<const Matrix*> eval;
  for (const Matrix& m : target_features) eval.push_back(&m);
  const std::vector<int> preds = predict(trained.params, graph, eval);
  result.confusion = confusion(preds, target_labels, dataset.classes());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) correct += preds[i] == target_labels[i];
  result.accuracy = static_cast<double>(correct) / static_cast<double>(preds.size());
  return result;
}

}  // namespace

LoocvResult loocv(const FeatureDataset& dataset, const ExperimentConfig& config) {
  validate(config);
  const std::size_t subjects = dataset.subject_ids.size();
  if (subjects < 2) throw DataError("leave-one-subject-out needs at least two subjects");
  for (const std::string& id : dataset.subject_ids) {
    const bool has = std::any_of(dataset.samples.begin(), dataset.samples.end(),
                                 [&](const FeatureSample& s) { return s.subject == id; });
    if (!has) throw DataError("subject '" + id + "' has no samples");
  }
  const GraphContext graph = build_graph(dataset.layout, config.graph);

  LoocvResult result;
  result.folds.resize(subjects);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t fold = next.fetch_add(1);
      if (fold >= subjects) return;
      try {
        result.folds[fold] = run_fold(dataset, config, graph, fold);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(config.threads, subjects);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> accuracies;
  result.confusion = ConfusionMatrix(dataset.classes());
  for (const FoldResult& f : result.folds) {
    accuracies.push_back(f.accuracy);
    result.confusion.merge(f.confusion);
  }
  result.summary = summarize(accuracies);
  return result;
}

std::vector<double> default_k_grid() {
  return {0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
}

std::vector<SweepRow> sweep_k(const FeatureDataset& dataset, const ExperimentConfig& config,
                              std::span<const double> ks) {
  for (double k : ks) {
    if (!(k > 0.0 && k <= 1.0)) throw ConfigError("k values must lie in (0, 1]");
  }
  std::vector<SweepRow> rows;
  for (double k : ks) {
    ExperimentConfig c = config;
    c.train.model.pool_ratio = k;
    rows.push_back({k, pooled_count(k, dataset.layout.size()), loocv(dataset, c)});
  }
  return rows;
}

std::vector<AblationRow> ablate(const FeatureDataset& dataset, const ExperimentConfig& config) {
  struct Variant {
    const char* name;
    bool adversarial;
    EmotionLossKind loss;
  };
  const Variant variants[] = {
      {"DAGAM", true, EmotionLossKind::kKl},
      {"- Domain adversarial", false, EmotionLossKind::kKl},
      {"- KL divergence", true, EmotionLossKind::kCrossEntropy},
      {"- Domain adversarial and KL divergence", false, EmotionLossKind::kCrossEntropy},
  };
  const LambdaMode adversarial_mode =
      config.train.lambda_mode == LambdaMode::kOff ? LambdaMode::kConstant
                                                   : config.train.lambda_mode;
  std::vector<AblationRow> rows;
  for (const Variant& v : variants) {
    ExperimentConfig c = config;
    c.train.lambda_mode = v.adversarial ? adversarial_mode : LambdaMode::kOff;
    c.train.emotion_loss = v.loss;
    rows.push_back({v.name, c.train.lambda_mode, v.loss, loocv(dataset, c)});
  }
  return rows;
}

}  // namespace dagam
