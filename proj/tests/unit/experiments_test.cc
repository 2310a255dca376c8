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

#include <gtest/gtest.h>

#include <set>

#include "dagam/errors.h"
#include "dagam/random.h"

namespace dagam {
namespace {

TEST(ConfusionTest, Examples) {
  const std::vector<int> labels{0, 1, 2, 2};
  const ConfusionMatrix perfect = confusion(labels, labels, 3);
  const auto n = perfect.normalized();
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(n[r * 3 + c], r == c ? 1.0 : 0.0);
  }
  const std::vector<int> l2{0, 0}, p2{0, 1};
  const auto half = confusion(p2, l2, 2).normalized();
  EXPECT_EQ(half, (std::vector<double>{0.5, 0.5, 0, 0}));
  const auto empty = confusion({}, {}, 3);
  for (auto v : empty.counts) EXPECT_EQ(v, 0u);
}

TEST(ConfusionTest, Errors) {
  const std::vector<int> a{0, 3}, b{0, 1}, c{0};
  EXPECT_THROW(confusion(a, b, 3), DataError);
  EXPECT_THROW(confusion(b, a, 3), DataError);
  EXPECT_THROW(confusion(b, c, 3), DataError);
}

TEST(ConfusionTest, NormalizedRowsSumToOneOrZero) {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t classes = 2 + rng.below(4);
    const std::size_t n = rng.below(40);
    std::vector<int> p(n), l(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<int>(rng.below(classes));
      l[i] = static_cast<int>(rng.below(classes - 1));  // last class unsupported
    }
    const auto m = confusion(p, l, classes).normalized();
    for (std::size_t r = 0; r < classes; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < classes; ++c) s += m[r * classes + c];
      if (s != 0.0) EXPECT_NEAR(s, 1.0, 1e-9);
    }
    for (std::size_t c = 0; c < classes; ++c) EXPECT_EQ(m[(classes - 1) * classes + c], 0.0);
  }
}

TEST(SummaryTest, PopulationStandardDeviation) {
  const std::vector<double> two{1.0, 0.5};
  EXPECT_EQ(summarize(two).mean, 0.75);
  EXPECT_EQ(summarize(two).std, 0.25);
  const std::vector<double> same{0.8, 0.8, 0.8};
  EXPECT_NEAR(summarize(same).mean, 0.8, 1e-15);
  EXPECT_EQ(summarize(same).std, 0.0);
}

// Small feature dataset: `subjects` subjects, 8 channels, 3 bands.
FeatureDataset small_dataset(std::size_t subjects, std::size_t per_class = 4) {
  FeatureDataset d;
  d.layout = standard_62_layout().prefix(8);
  d.class_names = {"a", "b", "c"};
  d.bands = {{"x", 1, 4}, {"y", 4, 8}, {"z", 8, 14}};
  Rng rng(5);
  for (std::size_t s = 0; s < subjects; ++s) {
    const std::string id = "s" + std::to_string(s);
    d.subject_ids.push_back(id);
    const double shift = 0.3 * rng.normal();
    for (std::size_t i = 0; i < per_class; ++i) {
      for (int c = 0; c < 3; ++c) {
        FeatureSample x{Matrix(8, 3), c, id, 0, static_cast<int>(i)};
        for (std::size_t n = 0; n < 8; ++n) {
          for (std::size_t b = 0; b < 3; ++b) {
            x.features(n, b) = 1.0 + shift + (b == static_cast<std::size_t>(c)) + 0.2 * rng.normal();
          }
        }
        d.samples.push_back(std::move(x));
      }
    }
  }
  return d;
}

ExperimentConfig small_config(std::size_t epochs = 2) {
  ExperimentConfig c;
  c.train.model.gcn_widths = {4, 4, 4};
  c.train.model.emotion_hidden = {8, 4};
  c.train.model.domain_hidden = {4};
  c.train.epochs = epochs;
  c.train.batch_size = 8;
  c.train.seed = 77;
  return c;
}

TEST(LoocvTest, OneFoldPerSubject) {
  const FeatureDataset d = small_dataset(5);
  const LoocvResult r = loocv(d, small_config());
  ASSERT_EQ(r.folds.size(), 5u);
  std::set<std::string> targets;
  std::uint64_t total = 0;
  for (std::size_t f = 0; f < 5; ++f) {
    const auto& fold = r.folds[f];
    targets.insert(fold.target_subject);
    EXPECT_EQ(fold.source_subjects.size(), 4u);
    for (const auto& s : fold.source_subjects) EXPECT_NE(s, fold.target_subject);
    EXPECT_EQ(fold.seed, 77u ^ f);
    for (auto v : fold.confusion.counts) total += v;
  }
  EXPECT_EQ(targets.size(), 5u);
  EXPECT_EQ(total, d.samples.size());
  std::vector<double> acc;
  for (const auto& f : r.folds) acc.push_back(f.accuracy);
  EXPECT_EQ(r.summary.mean, summarize(acc).mean);
  EXPECT_EQ(r.summary.std, summarize(acc).std);
}

TEST(LoocvTest, Errors) {
  EXPECT_THROW(loocv(small_dataset(1), small_config()), DataError);
  FeatureDataset d = small_dataset(3);
  d.subject_ids.push_back("ghost");
  EXPECT_THROW(loocv(d, small_config()), DataError);
}

TEST(LoocvTest, TargetLabelsNeverReachTraining) {
  const FeatureDataset clean = small_dataset(3);
  FeatureDataset corrupted = clean;
  for (auto& s : corrupted.samples) {
    if (s.subject == "s1") s.label = (s.label + 1) % 3;
  }
  const LoocvResult a = loocv(clean, small_config(3));
  const LoocvResult b = loocv(corrupted, small_config(3));
  const auto& fa = a.folds[1];
  const auto& fb = b.folds[1];
  ASSERT_EQ(fa.target_subject, "s1");
  ASSERT_EQ(fa.history.size(), fb.history.size());
  for (std::size_t e = 0; e < fa.history.size(); ++e) {
    EXPECT_EQ(fa.history[e].total_loss, fb.history[e].total_loss);
    EXPECT_EQ(fa.history[e].source_accuracy, fb.history[e].source_accuracy);
  }
  // same predictions: column sums of the confusion matrix agree
  for (std::size_t c = 0; c < 3; ++c) {
    std::uint64_t pa = 0, pb = 0;
    for (std::size_t r = 0; r < 3; ++r) {
      pa += fa.confusion.count(r, c);
      pb += fb.confusion.count(r, c);
    }
    EXPECT_EQ(pa, pb);
  }
}

TEST(LoocvTest, ThreadCountDoesNotChangeResults) {
  const FeatureDataset d = small_dataset(4);
  ExperimentConfig one = small_config(), many = small_config();
  many.threads = 3;
  const LoocvResult a = loocv(d, one), b = loocv(d, many);
  for (std::size_t f = 0; f < 4; ++f) {
    EXPECT_EQ(a.folds[f].accuracy, b.folds[f].accuracy);
    EXPECT_EQ(a.folds[f].history.back().total_loss, b.folds[f].history.back().total_loss);
  }
}

TEST(SweepTest, GridRowsAndSingletonConsistency) {
  const FeatureDataset d = small_dataset(3, 2);
  const auto grid = default_k_grid();
  ASSERT_EQ(grid.size(), 9u);
  EXPECT_EQ(grid.front(), 0.9);
  EXPECT_EQ(grid.back(), 0.1);

  const std::vector<double> half{0.5};
  const auto rows = sweep_k(d, small_config(1), half);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].pooled_nodes, 4u);
  const LoocvResult plain = loocv(d, small_config(1));
  EXPECT_EQ(rows[0].result.summary.mean, plain.summary.mean);
  EXPECT_EQ(rows[0].result.folds[0].history.back().total_loss,
            plain.folds[0].history.back().total_loss);

  const std::vector<double> bad{0.0};
  EXPECT_THROW(sweep_k(d, small_config(1), bad), ConfigError);
}

TEST(SweepTest, PooledNodesOn62Channels) {
  for (double k : default_k_grid()) {
    EXPECT_EQ(pooled_count(k, 62), static_cast<std::size_t>(std::ceil(k * 62 - 1e-9)));
  }
  EXPECT_EQ(pooled_count(0.5, 62), 31u);
}

TEST(AblateTest, FourVariantsInOrderAndReproducible) {
  const FeatureDataset d = small_dataset(3, 2);
  const auto a = ablate(d, small_config(1));
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a[0].variant, "DAGAM");
  EXPECT_EQ(a[1].variant, "- Domain adversarial");
  EXPECT_EQ(a[2].variant, "- KL divergence");
  EXPECT_EQ(a[3].variant, "- Domain adversarial and KL divergence");
  EXPECT_EQ(a[1].lambda_mode, LambdaMode::kOff);
  EXPECT_EQ(a[3].lambda_mode, LambdaMode::kOff);
  EXPECT_EQ(a[2].emotion_loss, EmotionLossKind::kCrossEntropy);
  EXPECT_EQ(a[0].emotion_loss, EmotionLossKind::kKl);
  // one-hot labels: KL and cross-entropy agree, so variants pair up exactly
  EXPECT_EQ(a[0].result.folds[0].history.back().emotion_loss,
            a[2].result.folds[0].history.back().emotion_loss);
  const auto b = ablate(d, small_config(1));
  for (std::size_t v = 0; v < 4; ++v) {
    for (std::size_t f = 0; f < 3; ++f) {
      EXPECT_EQ(a[v].result.folds[f].accuracy, b[v].result.folds[f].accuracy);
      EXPECT_EQ(a[v].result.folds[f].history.back().total_loss,
                b[v].result.folds[f].history.back().total_loss);
    }
  }
}

TEST(BuildGraphTest, DefaultPairsAreNegative) {
  const ElectrodeLayout layout = standard_62_layout();
  const GraphContext g = build_graph(layout, GraphConfig{});
  EXPECT_EQ(g.adjacency(layout.index_of("T7"), layout.index_of("T8")), -1.0);
  // a prefix layout keeps only the pairs it contains
  const ElectrodeLayout small = layout.prefix(5);
  const GraphContext gs = build_graph(small, GraphConfig{});
  EXPECT_EQ(gs.adjacency(small.index_of("FP1"), small.index_of("FP2")), -1.0);
  EXPECT_EQ(gs.adjacency.rows, 5u);
}

}  // namespace
}  // namespace dagam
