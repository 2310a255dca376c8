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

#ifndef DAGAM_EXPERIMENTS_H_
#define DAGAM_EXPERIMENTS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dagam/config.h"
#include "dagam/dataset.h"
#include "dagam/model.h"
#include "dagam/training.h"

namespace dagam {

// Counts indexed [true label][prediction].
struct ConfusionMatrix {
  std::size_t classes = 0;
  std::vector<std::uint64_t> counts;

  explicit ConfusionMatrix(std::size_t c = 0) : classes(c), counts(c * c, 0) {}

  std::uint64_t count(std::size_t label, std::size_t pred) const {
    return counts[label * classes + pred];
  }
  // Row-normalised proportions; rows without support are all zero.
  std::vector<double> normalized() const;
  void merge(const ConfusionMatrix& other);
};

// Throws DataError for classes outside [0, classes) or length mismatch.
ConfusionMatrix confusion(std::span<const int> preds, std::span<const int> labels,
                          std::size_t classes);

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

Summary summarize(std::span<const double> values);

// Adjacency from the layout and graph config, with its renormalised Laplacian.
GraphContext build_graph(const ElectrodeLayout& layout, const GraphConfig& config);

// Per-fold seed derived from the master seed.
inline std::uint64_t fold_seed(std::uint64_t master, std::size_t fold) {
  return master ^ static_cast<std::uint64_t>(fold);
}

struct FoldResult {
  std::string target_subject;
  std::vector<std::string> source_subjects;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::vector<EpochRecord> history;
};

struct LoocvResult {
  std::vector<FoldResult> folds;
  Summary summary;
  ConfusionMatrix confusion;  // summed over folds
};

// Leave-one-subject-out: one fold per subject, trained on all others, with
// the held-out subject's features as the unlabelled target domain.
// Throws DataError with fewer than two subjects or an empty subject.
LoocvResult loocv(const FeatureDataset& dataset, const ExperimentConfig& config);

// 0.9, 0.8, ..., 0.1
std::vector<double> default_k_grid();

struct SweepRow {
  double k = 0.0;
  std::size_t pooled_nodes = 0;
  LoocvResult result;
};

std::vector<SweepRow> sweep_k(const FeatureDataset& dataset, const ExperimentConfig& config,
                              std::span<const double> ks);

struct AblationRow {
  std::string variant;
  LambdaMode lambda_mode;
  EmotionLossKind emotion_loss;
  LoocvResult result;
};

// Full model, without domain adversarial training, with cross-entropy in
// place of KL divergence, and with both removed, in that order.
std::vector<AblationRow> ablate(const FeatureDataset& dataset, const ExperimentConfig& config);

}  // namespace dagam

#endif  // DAGAM_EXPERIMENTS_H_
