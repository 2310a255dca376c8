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

#ifndef DAGAM_SYNTHETIC_H_
#define DAGAM_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "dagam/dataset.h"
#include "dagam/graph.h"
#include "dagam/signal.h"

namespace dagam {

// Parameters of the synthetic benchmark. Each recording is a sum of
// band-limited Gaussian noise components, one per band, whose log-variance is
//
//   base_b + separation * class_pattern[c][n][b] + shift * drift[s][n][b]
//
// for class c, channel n, band b and subject s. Patterns and drifts are each a
// band profile common to all channels plus per-channel variation. Class
// patterns are shared by all subjects, drifts are per subject, so DE features
// are class-separable but shifted from one subject to the next.
struct SyntheticSpec {
  std::size_t subjects = 6;
  std::size_t classes = 3;
  std::size_t channels = 62;
  double separation = 1.0;
  double shift = 1.0;
  std::uint64_t seed = 1;
  double rate = 200.0;
  double trial_seconds = 10.0;
  std::size_t trials_per_class = 1;
  std::vector<Band> bands = default_bands();
};

// Throws ConfigError for impossible specs (fewer than two subjects or
// classes, non-positive separation, negative shift, more channels than the
// 62-channel montage, bands above Nyquist).
void validate(const SyntheticSpec& spec);

// JSON form used by manifests and benchmark configs. Missing keys keep their
// defaults; unknown keys are a ConfigError.
Json to_json(const SyntheticSpec& spec);
SyntheticSpec synthetic_spec_from_json(const Json& json, SyntheticSpec base = {});

std::vector<std::string> synthetic_class_names(std::size_t classes);

struct SyntheticData {
  DatasetManifest manifest;
  ElectrodeLayout layout;
  std::vector<Recording> recordings;  // manifest order
};

SyntheticData synthesize(const SyntheticSpec& spec);

// Writes manifest.json, layout.csv and one CSV per recording into `dir`.
// The same spec always produces byte-identical files.
void generate_synthetic(const SyntheticSpec& spec, const std::filesystem::path& dir);

}  // namespace dagam

#endif  // DAGAM_SYNTHETIC_H_
