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

#ifndef DAGAM_CONFIG_H_
#define DAGAM_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "dagam/graph.h"
#include "dagam/signal.h"
#include "dagam/training.h"

namespace dagam {

using Json = nlohmann::ordered_json;

struct GraphConfig {
  double sigma = kDefaultSigma;
  // nullopt: the default montage pairs that exist in the layout. An explicit
  // list must name existing channels.
  std::optional<std::vector<ChannelPair>> global_pairs;
  double global_weight = -1.0;
};

struct FeatureConfig {
  std::vector<Band> bands = default_bands();
  double window_s = 1.0;
  PreprocessOptions preprocess;
};

// Every tunable of an experiment. Resolution order: built-in defaults, then a
// config file, then command-line flags; DAGAM_SEED overrides the seed.
struct ExperimentConfig {
  GraphConfig graph;
  FeatureConfig features;
  TrainConfig train;
  // Folds trained concurrently. Results do not depend on this value.
  std::size_t threads = 1;
};

// Throws ConfigError on out-of-range values.
void validate(const ExperimentConfig& config);

Json to_json(const ExperimentConfig& config);

// Keys present in `json` override `base`; unknown keys are a ConfigError.
ExperimentConfig config_from_json(const Json& json, ExperimentConfig base = {});

ExperimentConfig load_config(const std::filesystem::path& path,
                             ExperimentConfig base = {});

// Applies DAGAM_SEED when set. Throws ConfigError for a malformed value.
void apply_seed_override(ExperimentConfig& config);

const char* to_string(LambdaMode mode);
LambdaMode lambda_mode_from_string(const std::string& text);
const char* to_string(EmotionLossKind kind);
EmotionLossKind emotion_loss_from_string(const std::string& text);

}  // namespace dagam

#endif  // DAGAM_CONFIG_H_
