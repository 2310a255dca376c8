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

#include "dagam/signal.h"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "dagam/errors.h"

namespace dagam {
namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Real-input DFT of fixed length n with reusable buffers.
class RealDft {
 public:
  explicit RealDft(std::size_t n) : n_(n), real_(n), spectrum_(n / 2 + 1) {
    std::lock_guard lock(planner_mutex());
    auto* spec = reinterpret_cast<fftw_complex*>(spectrum_.data());
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_.data(), spec, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real_.data(), FFTW_ESTIMATE);
  }
  ~RealDft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  RealDft(const RealDft&) = delete;
  RealDft& operator=(const RealDft&) = delete;

  std::vector<std::complex<double>> forward(std::span<const double> signal) {
    std::copy(signal.begin(), signal.end(), real_.begin());
    fftw_execute(forward_);
    return spectrum_;
  }

  // c2r overwrites its input, so the spectrum is copied into the plan buffer.
  std::vector<double> inverse(const std::vector<std::complex<double>>& spectrum) {
    std::copy(spectrum.begin(), spectrum.end(), spectrum_.begin());
    fftw_execute(inverse_);
    std::vector<double> out(real_);
    const double norm = 1.0 / static_cast<double>(n_);
    for (double& v : out) v *= norm;
    return out;
  }

  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> real_;
  std::vector<std::complex<double>> spectrum_;
  fftw_plan forward_;
  fftw_plan inverse_;
};

void check_band(double lo, double hi, double rate) {
  if (!(rate > 0.0)) throw ConfigError("sampling rate must be positive");
  if (!(lo >= 0.0 && lo < hi)) throw ConfigError("band needs 0 <= lo < hi");
  if (hi > rate / 2.0) {
    throw ConfigError("band edge " + std::to_string(hi) + " Hz exceeds Nyquist " +
                      std::to_string(rate / 2.0) + " Hz");
  }
}

// Zeroes the bins outside [lo, hi]. Bin k of an n-point DFT sits at k*rate/n.
std::vector<std::complex<double>> masked(std::vector<std::complex<double>> spectrum,
                                         std::size_t n, double lo, double hi, double rate) {
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double f = static_cast<double>(k) * rate / static_cast<double>(n);
    if (f < lo || f > hi) spectrum[k] = 0.0;
  }
  return spectrum;
}

}  // namespace

std::vector<Band> default_bands() {
  return {{"delta", 1, 4}, {"theta", 4, 8}, {"alpha", 8, 14}, {"beta", 14, 31}, {"gamma", 31, 50}};
}

Recording downsample(const Recording& recording, double target) {
  if (!(target > 0.0)) throw ConfigError("target rate must be positive");
  const double ratio = recording.rate / target;
  const double factor = std::round(ratio);
  if (factor < 1.0 || std::abs(ratio - factor) > 1e-9) {
    throw ConfigError("cannot decimate " + std::to_string(recording.rate) + " Hz to " +
                      std::to_string(target) + " Hz by an integer factor");
  }
  if (factor == 1.0) return recording;
  const auto step = static_cast<std::size_t>(factor);
  const std::size_t len = recording.samples.cols;
  const std::size_t out_len = len / step;
  Recording out = recording;
  out.rate = target;
  out.samples = Matrix(recording.samples.rows, out_len);
  if (out_len == 0) return out;
  RealDft dft(len);
  for (std::size_t c = 0; c < recording.samples.rows; ++c) {
    std::span<const double> row(recording.samples.values.data() + c * len, len);
    auto spectrum = masked(dft.forward(row), len, 0.0, target / 2.0, recording.rate);
    const auto filtered = dft.inverse(spectrum);
    for (std::size_t t = 0; t < out_len; ++t) out.samples(c, t) = filtered[t * step];
  }
  return out;
}

std::vector<double> band_isolate(std::span<const double> signal, double lo, double hi,
                                 double rate) {
  check_band(lo, hi, rate);
  if (signal.empty()) return {};
  RealDft dft(signal.size());
  return dft.inverse(masked(dft.forward(signal), signal.size(), lo, hi, rate));
}

Recording band_isolate(const Recording& recording, double lo, double hi) {
  check_band(lo, hi, recording.rate);
  Recording out = recording;
  const std::size_t len = recording.samples.cols;
  if (len == 0) return out;
  RealDft dft(len);
  for (std::size_t c = 0; c < recording.samples.rows; ++c) {
    std::span<const double> row(recording.samples.values.data() + c * len, len);
    const auto filtered = dft.inverse(masked(dft.forward(row), len, lo, hi, recording.rate));
    std::copy(filtered.begin(), filtered.end(), out.samples.values.begin() + c * len);
  }
  return out;
}

double differential_entropy(std::span<const double> window) {
  if (window.size() < 2) throw ContractError("differential entropy needs >= 2 samples");
  double mean = 0.0;
  for (double v : window) mean += v;
  mean /= static_cast<double>(window.size());
  double ss = 0.0;
  for (double v : window) ss += (v - mean) * (v - mean);
  const double variance =
      std::max(ss / static_cast<double>(window.size() - 1), kVarianceFloor);
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * variance);
}

Recording preprocess(const Recording& recording, const PreprocessOptions& options) {
  Recording out = downsample(recording, options.target_rate);
  return band_isolate(out, options.lo, options.hi);
}

std::vector<FeatureSample> extract_features(const Recording& recording,
                                            std::span<const Band> bands, double window_s) {
  if (bands.empty()) throw ConfigError("at least one band is required");
  const double exact = window_s * recording.rate;
  const auto width = static_cast<std::size_t>(std::llround(exact));
  if (!(window_s > 0.0) || width < 2 || std::abs(exact - static_cast<double>(width)) > 1e-9) {
    throw ConfigError("window of " + std::to_string(window_s) +
                      " s must span an integer number (>= 2) of samples");
  }
  for (const Band& b : bands) check_band(b.lo, b.hi, recording.rate);
  const std::size_t len = recording.samples.cols;
  if (len < width) {
    throw DataError("recording of subject " + recording.subject + " trial " +
                    std::to_string(recording.trial) + " is shorter than one window");
  }
  const std::size_t windows = len / width;
  const std::size_t channels = recording.samples.rows;
  RealDft dft(width);
  std::vector<FeatureSample> out;
  out.reserve(windows);
  for (std::size_t w = 0; w < windows; ++w) {
    FeatureSample sample{Matrix(channels, bands.size()), recording.label, recording.subject,
                         recording.trial, static_cast<int>(w)};
    for (std::size_t c = 0; c < channels; ++c) {
      std::span<const double> window(recording.samples.values.data() + c * len + w * width,
                                     width);
      const auto spectrum = dft.forward(window);
      for (std::size_t b = 0; b < bands.size(); ++b) {
        const auto filtered =
            dft.inverse(masked(spectrum, width, bands[b].lo, bands[b].hi, recording.rate));
        sample.features(c, b) = differential_entropy(filtered);
      }
    }
    out.push_back(std::move(sample));
  }
  return out;
}

}  // namespace dagam
