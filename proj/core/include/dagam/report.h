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

#ifndef DAGAM_REPORT_H_
#define DAGAM_REPORT_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dagam/config.h"
#include "dagam/dataset.h"
#include "dagam/experiments.h"

namespace dagam {

inline constexpr int kResultsVersion = 1;

Json to_json(const ConfusionMatrix& matrix);
ConfusionMatrix confusion_from_json(const Json& json);
Json to_json(const LoocvResult& result);
// Inverse of to_json(LoocvResult); training histories are restored too.
LoocvResult loocv_from_json(const Json& json);

// Path and SHA-256 of every dataset input, for provenance checks.
Json dataset_provenance(const LoadedDataset& dataset, const std::string& path_as_given);

// Results file envelope: command, resolved config and its hash, seed,
// dataset provenance, class names and the command-specific payload.
Json results_document(const std::string& command, const ExperimentConfig& config,
                      const Json& provenance, const std::vector<std::string>& classes,
                      Json payload);

struct VerifyOutcome {
  bool ok = true;
  std::vector<std::string> problems;
};

// Re-hashes the dataset files and the embedded config and compares them with
// the recorded digests.
VerifyOutcome verify_results(const Json& document);

std::string loocv_table(const LoocvResult& result);
std::string sweep_table(std::span<const SweepRow> rows);
std::string ablation_table(std::span<const AblationRow> rows);

// Row-normalised percentages, aligned columns.
std::string confusion_table(const ConfusionMatrix& matrix, const std::vector<std::string>& names);

// Standalone SVG heatmap with a percentage in every cell. Deterministic.
std::string confusion_svg(const ConfusionMatrix& matrix, const std::vector<std::string>& names,
                          const std::string& title);

// Writes `svg_path` and a plain-text table next to it (same stem, .txt).
// Throws IoError when the location is not writable.
void emit_confusion(const ConfusionMatrix& matrix, const std::vector<std::string>& names,
                    const std::filesystem::path& svg_path, const std::string& title);

}  // namespace dagam

#endif  // DAGAM_REPORT_H_
