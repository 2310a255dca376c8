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

#ifndef DAGAM_DATASET_H_
#define DAGAM_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dagam/config.h"
#include "dagam/graph.h"
#include "dagam/signal.h"

namespace dagam {

inline constexpr int kManifestVersion = 1;
inline constexpr const char* kManifestName = "manifest.json";

struct RecordingRef {
  std::string file;  // relative to the dataset root
  int trial = 0;
  int label = 0;
};

struct SubjectEntry {
  std::string id;
  std::vector<RecordingRef> recordings;
};

// manifest.json at the dataset root. `kind` is "recordings" (per-trial
// signal CSVs listed under subjects) or "features" (a single feature CSV).
struct DatasetManifest {
  int version = kManifestVersion;
  std::string kind = "recordings";
  std::string layout_file = "layout.csv";
  std::vector<std::string> classes;
  double rate = 200.0;
  std::vector<Band> bands = default_bands();
  double window_s = 1.0;
  std::vector<SubjectEntry> subjects;
  std::string features_file;
};

Json to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const Json& json, const std::filesystem::path& origin);

// Window-level DE features for every subject, ready for training.
struct FeatureDataset {
  ElectrodeLayout layout;
  std::vector<std::string> class_names;
  std::vector<Band> bands;
  double window_s = 1.0;
  std::vector<std::string> subject_ids;  // manifest order
  std::vector<FeatureSample> samples;

  std::size_t classes() const { return class_names.size(); }
};

struct LoadedDataset {
  std::filesystem::path root;
  DatasetManifest manifest;
  ElectrodeLayout layout;
  std::vector<Recording> recordings;         // kind == "recordings"
  std::optional<FeatureDataset> features;    // kind == "features"
};

// `path` is a dataset directory or its manifest file. Validates every
// referenced file; errors name the file and line.
LoadedDataset load_dataset(const std::filesystem::path& path);

// Precomputed features when present, otherwise preprocess (downsample to the
// working rate, broadband filter) and extract features from every recording.
FeatureDataset to_feature_dataset(const LoadedDataset& dataset, const FeatureConfig& config);

FeatureDataset compute_features(const std::vector<Recording>& recordings,
                                const DatasetManifest& manifest, const ElectrodeLayout& layout,
                                const FeatureConfig& config);

// Writes manifest.json, layout.csv and features.csv into `dir`.
void write_feature_dataset(const FeatureDataset& dataset, const std::filesystem::path& dir);

// Header row of channel names, then one row per time sample.
Recording read_recording_csv(const std::filesystem::path& path, const ElectrodeLayout& layout);
void write_recording_csv(const Recording& recording, const ElectrodeLayout& layout,
                         const std::filesystem::path& path);

// Manifest plus every file it references, relative to the root, sorted.
std::vector<std::string> dataset_files(const LoadedDataset& dataset);

}  // namespace dagam

#endif  // DAGAM_DATASET_H_
