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

#include "dagam/dataset.h"

#include <gtest/gtest.h>

#include "dagam/errors.h"
#include "dagam/files.h"
#include "dagam/synthetic.h"
#include "test_util.h"

namespace dagam {
namespace {

FeatureDataset random_features(std::size_t channels) {
  FeatureDataset d;
  d.layout = standard_62_layout().prefix(channels);
  d.class_names = {"a", "b"};
  d.bands = default_bands();
  d.subject_ids = {"p1", "p2"};
  Rng rng(3);
  for (int i = 0; i < 6; ++i) {
    FeatureSample s{Matrix(channels, 5), i % 2, i < 3 ? "p1" : "p2", i / 2, i};
    for (double& v : s.features.values) v = rng.normal() * 1e3 + rng.uniform();
    d.samples.push_back(std::move(s));
  }
  return d;
}

TEST(DatasetTest, FeatureRoundTrip) {
  const auto dir = testing::temp_dir("features_rt");
  const FeatureDataset d = random_features(62);
  write_feature_dataset(d, dir);
  const LoadedDataset loaded = load_dataset(dir);
  ASSERT_TRUE(loaded.features.has_value());
  const FeatureDataset& r = *loaded.features;
  EXPECT_EQ(r.layout.size(), 62u);
  EXPECT_EQ(r.class_names, d.class_names);
  EXPECT_EQ(r.subject_ids, d.subject_ids);
  ASSERT_EQ(r.samples.size(), d.samples.size());
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    EXPECT_EQ(r.samples[i].subject, d.samples[i].subject);
    EXPECT_EQ(r.samples[i].label, d.samples[i].label);
    EXPECT_EQ(r.samples[i].trial, d.samples[i].trial);
    EXPECT_EQ(r.samples[i].window, d.samples[i].window);
    for (std::size_t k = 0; k < d.samples[i].features.values.size(); ++k) {
      EXPECT_NEAR(r.samples[i].features.values[k], d.samples[i].features.values[k], 1e-12);
    }
  }
  // the manifest path works as well as the directory
  EXPECT_EQ(load_dataset(dir / kManifestName).features->samples.size(), 6u);
  EXPECT_EQ(dataset_files(loaded),
            (std::vector<std::string>{"features.csv", "layout.csv", "manifest.json"}));
}

TEST(DatasetTest, RecordingRoundTrip) {
  const auto dir = testing::temp_dir("recording_rt");
  const ElectrodeLayout layout = standard_62_layout().prefix(3);
  Recording rec;
  rec.samples = Matrix(3, 4, std::vector<double>{0.1, -2, 3e-9, 4, 5, 6, 7, 8, 9, 1e300, -0.0, 1});
  write_recording_csv(rec, layout, dir / "r.csv");
  EXPECT_EQ(read_file(dir / "r.csv").substr(0, 12), "FP1,FPZ,FP2\n");
  const Recording back = read_recording_csv(dir / "r.csv", layout);
  EXPECT_EQ(back.samples, rec.samples);
}

TEST(DatasetTest, SixtyTwoRowLayoutGivesSixtyTwoNodes) {
  const auto dir = testing::temp_dir("layout62");
  write_layout_csv(standard_62_layout(), dir / "layout.csv");
  const ElectrodeLayout l = read_layout_csv(dir / "layout.csv");
  EXPECT_EQ(l.size(), 62u);
  SyntheticSpec spec;
  spec.subjects = 2;
  spec.trial_seconds = 1.0;
  generate_synthetic(spec, dir / "ds");
  EXPECT_EQ(load_dataset(dir / "ds").layout.size(), 62u);
}

TEST(DatasetTest, MissingFileIsNamed) {
  const auto dir = testing::temp_dir("missing");
  SyntheticSpec spec;
  spec.subjects = 2;
  spec.channels = 4;
  spec.trial_seconds = 1.0;
  generate_synthetic(spec, dir);
  std::filesystem::remove(dir / "s02" / "trial_01.csv");
  try {
    load_dataset(dir);
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("trial_01.csv"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_dataset(dir / "nowhere"), LoadError);
}

TEST(DatasetTest, ColumnMismatchNamesFileAndLine) {
  const auto dir = testing::temp_dir("columns");
  SyntheticSpec spec;
  spec.subjects = 2;
  spec.channels = 4;
  spec.trial_seconds = 1.0;
  generate_synthetic(spec, dir);
  const auto file = dir / "s01" / "trial_00.csv";
  std::string text = read_file(file);
  const auto third = text.find('\n', text.find('\n', text.find('\n') + 1) + 1);
  text.insert(third, ",1.5");
  write_file_atomic(file, text);
  try {
    load_dataset(dir);
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("trial_00.csv:3"), std::string::npos) << e.what();
  }
  // recordings with fewer columns than the layout
  generate_synthetic(spec, dir);
  EXPECT_NO_THROW(load_dataset(dir));
  write_layout_csv(standard_62_layout().prefix(5), dir / "layout.csv");
  EXPECT_THROW(load_dataset(dir), LoadError);
}

TEST(DatasetTest, UnsupportedVersion) {
  const auto dir = testing::temp_dir("version");
  write_feature_dataset(random_features(4), dir);
  Json m = Json::parse(read_file(dir / kManifestName));
  m["version"] = 2;
  write_file_atomic(dir / kManifestName, m.dump());
  try {
    load_dataset(dir);
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("version 2"), std::string::npos) << e.what();
  }
}

TEST(DatasetTest, BadLabelsAndSubjects) {
  const auto dir = testing::temp_dir("labels");
  FeatureDataset d = random_features(4);
  d.samples[2].label = 5;
  write_feature_dataset(d, dir);
  EXPECT_THROW(load_dataset(dir), LoadError);
  d.samples[2].label = 0;
  d.samples[3].subject = "p9";
  write_feature_dataset(d, dir);
  EXPECT_THROW(load_dataset(dir), LoadError);
}

TEST(DatasetTest, ComputedFeaturesHaveLayoutShape) {
  SyntheticSpec spec;
  spec.subjects = 2;
  spec.channels = 5;
  spec.trial_seconds = 3.0;
  const SyntheticData data = synthesize(spec);
  const FeatureDataset d = compute_features(data.recordings, data.manifest, data.layout, {});
  EXPECT_EQ(d.samples.size(), 2u * 3u * 3u);
  for (const auto& s : d.samples) {
    EXPECT_EQ(s.features.rows, 5u);
    EXPECT_EQ(s.features.cols, 5u);
  }
  EXPECT_EQ(d.subject_ids, (std::vector<std::string>{"s01", "s02"}));
}

}  // namespace
}  // namespace dagam
