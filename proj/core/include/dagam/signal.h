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

#ifndef DAGAM_SIGNAL_H_
#define DAGAM_SIGNAL_H_

#include <span>
#include <string>
#include <vector>

#include "dagam/matrix.h"

namespace dagam {

// Multichannel recording, one row per channel.
struct Recording {
  Matrix samples;
  double rate = 0.0;
  std::string subject;
  int trial = 0;
  int label = 0;
};

// Per-window features: one row per channel, one column per band.
struct FeatureSample {
  Matrix features;
  int label = 0;
  std::string subject;
  int trial = 0;
  int window = 0;
};

struct Band {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
};

// delta 1-4, theta 4-8, alpha 8-14, beta 14-31, gamma 31-50 Hz.
std::vector<Band> default_bands();

inline constexpr double kVarianceFloor = 1e-8;

// Integer decimation to `target` Hz. Content above the target Nyquist
// frequency is removed in the frequency domain first. Output length is
// floor(len * target / rate). Throws ConfigError for non-integer ratios.
Recording downsample(const Recording& recording, double target);

// Keeps the DFT bins whose frequency lies in [lo, hi] and transforms back.
// Requires 0 <= lo < hi <= rate / 2 (ConfigError otherwise).
std::vector<double> band_isolate(std::span<const double> signal, double lo, double hi,
                                 double rate);

// Applies band_isolate to every channel.
Recording band_isolate(const Recording& recording, double lo, double hi);

// 0.5 * ln(2 pi e var) with the unbiased sample variance floored at
// kVarianceFloor. Requires at least two samples.
double differential_entropy(std::span<const double> window);

struct PreprocessOptions {
  double target_rate = 200.0;
  double lo = 1.0;
  double hi = 75.0;
};

// Downsample, then the broadband 1-75 Hz filter.
Recording preprocess(const Recording& recording, const PreprocessOptions& options);

// Splits the recording into non-overlapping windows of window_s seconds and
// computes the differential entropy of every channel in every band. Trailing
// samples that do not fill a window are dropped. Throws DataError when the
// recording is shorter than one window.
std::vector<FeatureSample> extract_features(const Recording& recording,
                                            std::span<const Band> bands, double window_s);

}  // namespace dagam

#endif  // DAGAM_SIGNAL_H_
