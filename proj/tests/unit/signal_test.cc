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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dagam/errors.h"
#include "dagam/random.h"

namespace dagam {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sine(double freq, double rate, std::size_t n, double amp = 1.0,
                         double phase = 0.3) {
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) {
    x[t] = amp * std::sin(2 * kPi * freq * static_cast<double>(t) / rate + phase);
  }
  return x;
}

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

Recording one_channel(std::vector<double> x, double rate) {
  Recording r;
  r.rate = rate;
  const std::size_t n = x.size();
  r.samples = Matrix(1, n, std::move(x));
  return r;
}

TEST(DownsampleTest, DecimatesByIntegerFactor) {
  Recording r = one_channel(sine(10, 1000, 5000), 1000);
  Recording d = downsample(r, 200);
  EXPECT_EQ(d.rate, 200.0);
  EXPECT_EQ(d.samples.cols, 1000u);
  Recording odd = one_channel(std::vector<double>(1003, 1.0), 1000);
  EXPECT_EQ(downsample(odd, 200).samples.cols, 200u);
}

TEST(DownsampleTest, SameRateIsIdentity) {
  Recording r = one_channel(sine(7, 200, 400), 200);
  EXPECT_EQ(downsample(r, 200).samples, r.samples);
}

TEST(DownsampleTest, PreservesInBandSinusoid) {
  // 10 Hz sine sampled at 1000 Hz for 5 s: an exact number of periods.
  Recording d = downsample(one_channel(sine(10, 1000, 5000, 2.0), 1000), 200);
  const auto want = sine(10, 200, 1000, 2.0);
  double peak = 0.0, err = 0.0;
  for (std::size_t t = 0; t < want.size(); ++t) {
    peak = std::max(peak, std::abs(d.samples(0, t)));
    err = std::max(err, std::abs(d.samples(0, t) - want[t]));
  }
  EXPECT_NEAR(peak, 2.0, 0.02);
  EXPECT_LT(err, 0.02);
}

TEST(DownsampleTest, RemovesContentAboveNewNyquist) {
  Recording d = downsample(one_channel(sine(300, 1000, 5000), 1000), 200);
  std::span<const double> row(d.samples.values);
  EXPECT_LT(norm(row), 1e-9 * std::sqrt(1000.0));
}

TEST(DownsampleTest, NonIntegerRatioIsAConfigError) {
  EXPECT_THROW(downsample(one_channel(std::vector<double>(10), 1000), 300), ConfigError);
}

TEST(BandIsolateTest, KeepsSineInsideBand) {
  const auto x = sine(10, 200, 400);
  const auto y = band_isolate(x, 8, 12, 200);
  ASSERT_EQ(y.size(), x.size());
  std::vector<double> diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = y[i] - x[i];
  EXPECT_LT(norm(diff) / norm(x), 1e-6);
}

TEST(BandIsolateTest, RemovesSineOutsideBand) {
  const auto x = sine(10, 200, 400);
  EXPECT_LT(norm(band_isolate(x, 20, 30, 200)), 1e-6 * norm(x));
}

TEST(BandIsolateTest, RemovesDc) {
  const std::vector<double> x(400, 3.5);
  EXPECT_LT(norm(band_isolate(x, 1, 75, 200)), 1e-9);
}

TEST(BandIsolateTest, IsIdempotent) {
  Rng rng(9);
  std::vector<double> x(333);
  for (double& v : x) v = rng.normal();
  const auto once = band_isolate(x, 4, 8, 200);
  const auto twice = band_isolate(once, 4, 8, 200);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(once[i], twice[i], 1e-9);
}

TEST(BandIsolateTest, RejectsBandsAboveNyquist) {
  const std::vector<double> x(10, 0.0);
  EXPECT_THROW(band_isolate(x, 1, 101, 200), ConfigError);
  EXPECT_THROW(band_isolate(x, 5, 5, 200), ConfigError);
}

// A window with exactly the requested unbiased sample variance: +-a
// alternating over an even length n has variance a^2 n / (n - 1).
std::vector<double> with_variance(double var, std::size_t n = 1000) {
  const double a = std::sqrt(var * static_cast<double>(n - 1) / static_cast<double>(n));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = i % 2 ? a : -a;
  return x;
}

TEST(DifferentialEntropyTest, ClosedForms) {
  EXPECT_NEAR(differential_entropy(with_variance(1.0 / (2 * kPi * std::numbers::e))), 0.0, 1e-12);
  EXPECT_NEAR(differential_entropy(with_variance(1.0)), 1.4189, 1e-4);
  EXPECT_NEAR(differential_entropy(with_variance(1.0)),
              0.5 * std::log(2 * kPi * std::numbers::e), 1e-12);
}

TEST(DifferentialEntropyTest, MonteCarloGaussian) {
  Rng rng(2024);
  std::vector<double> x(100000);
  for (double& v : x) v = 2.0 * rng.normal();
  const double oracle = 0.5 * std::log(2 * kPi * std::numbers::e * 4.0);
  EXPECT_NEAR(oracle, 2.1121, 1e-4);
  EXPECT_NEAR(differential_entropy(x), oracle, 0.01);
}

TEST(DifferentialEntropyTest, ShiftInvariantAndScalingLaw) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(200);
    for (double& v : x) v = rng.normal();
    const double c = rng.uniform(-100, 100);
    const double a = rng.uniform(0.1, 10) * (rng.uniform() < 0.5 ? -1 : 1);
    std::vector<double> shifted(x), scaled(x);
    for (double& v : shifted) v += c;
    for (double& v : scaled) v *= a;
    EXPECT_NEAR(differential_entropy(shifted), differential_entropy(x), 1e-9);
    EXPECT_NEAR(differential_entropy(scaled), differential_entropy(x) + std::log(std::abs(a)), 1e-9);
  }
}

TEST(DifferentialEntropyTest, ConstantWindowHitsTheFloor) {
  const std::vector<double> x(50, 4.0);
  EXPECT_EQ(differential_entropy(x), 0.5 * std::log(2 * kPi * std::numbers::e * kVarianceFloor));
  const std::vector<double> one{1.0};
  EXPECT_THROW(differential_entropy(one), ContractError);
}

TEST(ExtractFeaturesTest, WindowCountAndShape) {
  Recording r;
  r.rate = 200;
  r.samples = Matrix(62, 60 * 200);
  Rng rng(1);
  for (double& v : r.samples.values) v = rng.normal();
  const auto f = extract_features(r, default_bands(), 1.0);
  ASSERT_EQ(f.size(), 60u);
  for (const auto& s : f) {
    EXPECT_EQ(s.features.rows, 62u);
    EXPECT_EQ(s.features.cols, 5u);
  }
  EXPECT_EQ(f[59].window, 59);
  const std::vector<Band> full{{"all", 0, 100}};
  EXPECT_EQ(extract_features(r, full, 1.0)[0].features.cols, 1u);
  // trailing partial window is dropped
  r.samples = Matrix(2, 450);
  EXPECT_EQ(extract_features(r, default_bands(), 1.0).size(), 2u);
}

TEST(ExtractFeaturesTest, ShortRecordingIsADataError) {
  Recording r;
  r.rate = 200;
  r.samples = Matrix(2, 150);
  EXPECT_THROW(extract_features(r, default_bands(), 1.0), DataError);
}

TEST(ExtractFeaturesTest, BandOrderingFollowsInputPower) {
  // White noise per band, scaled so band power strictly increases with a
  // permuted order; DE must rank the bands the same way.
  Rng rng(77);
  const auto bands = default_bands();
  const std::vector<double> gains{0.5, 3.0, 1.0, 8.0, 0.1};
  const std::size_t n = 2000;
  std::vector<double> x(n, 0.0);
  for (std::size_t b = 0; b < bands.size(); ++b) {
    std::vector<double> w(n);
    for (double& v : w) v = rng.normal();
    auto band = band_isolate(w, bands[b].lo, bands[b].hi, 200);
    const double p = norm(band) / std::sqrt(static_cast<double>(n));
    for (std::size_t t = 0; t < n; ++t) x[t] += gains[b] * band[t] / p;
  }
  Recording r = one_channel(x, 200);
  const auto f = extract_features(r, bands, 10.0);
  ASSERT_EQ(f.size(), 1u);
  for (std::size_t a = 0; a < bands.size(); ++a) {
    for (std::size_t b = 0; b < bands.size(); ++b) {
      if (gains[a] < gains[b]) EXPECT_LT(f[0].features(0, a), f[0].features(0, b));
    }
  }
}

TEST(ExtractFeaturesTest, Deterministic) {
  Recording r;
  r.rate = 200;
  r.samples = Matrix(3, 800);
  Rng rng(6);
  for (double& v : r.samples.values) v = rng.normal();
  const auto a = extract_features(r, default_bands(), 1.0);
  const auto b = extract_features(r, default_bands(), 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].features, b[i].features);
}

TEST(PreprocessTest, DownsamplesThenBandLimits) {
  Recording r = one_channel(sine(10, 1000, 5000), 1000);
  for (std::size_t t = 0; t < 5000; ++t) r.samples(0, t) += 5.0;  // DC offset
  Recording p = preprocess(r, PreprocessOptions{});
  EXPECT_EQ(p.rate, 200.0);
  const auto want = sine(10, 200, 1000);
  for (std::size_t t = 0; t < want.size(); ++t) EXPECT_NEAR(p.samples(0, t), want[t], 0.02);
}

}  // namespace
}  // namespace dagam
