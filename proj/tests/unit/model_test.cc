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

#include "dagam/model.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "dagam/errors.h"
#include "dagam/grad_check.h"
#include "dagam/graph.h"
#include "dagam/losses.h"
#include "dagam/ops.h"
#include "test_util.h"

namespace dagam {
namespace {

using testing::random_tensor;

std::vector<double> values(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

Tensor column(std::vector<double> v) {
  const std::size_t n = v.size();
  return Tensor::matrix(n, 1, std::move(v));
}

TEST(GcnLayerTest, IdentityPropagation) {
  Tape tape;
  Tensor x = Tensor::matrix({{1, 2}, {3, 4}, {5, 6}});
  Tensor id3 = Matrix::identity(3).to_tensor();
  Tensor id2 = Matrix::identity(2).to_tensor();
  EXPECT_EQ(values(gcn_layer(tape, id3, x, id2, Activation::kIdentity)), values(x));
}

TEST(GcnLayerTest, NeighbourhoodAveraging) {
  Tape tape;
  Tensor l = Tensor::matrix({{0.5, 0.5}, {0.5, 0.5}});
  Tensor r = gcn_layer(tape, l, Tensor::matrix({{2}, {4}}), Tensor::matrix({{1}}),
                       Activation::kIdentity);
  EXPECT_EQ(values(r), (std::vector<double>{3, 3}));
}

TEST(GcnLayerTest, GradientMatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    Tensor l = renormalized_laplacian(Matrix(4, 4, {0, .3, 0, .8, .3, 0, .5, 0, 0, .5, 0, .2, .8, 0, .2, 0}))
                   .to_tensor();
    std::vector<Tensor> in{random_tensor(rng, {4, 3}), random_tensor(rng, {3, 5})};
    auto r = grad_check(
        [&](Tape& t) { return ops::sum_all(t, gcn_layer(t, l, in[0], in[1], Activation::kTanh)); },
        in);
    EXPECT_LT(r.max_relative_error, 1e-4);
  }
}

TEST(GcnLayerTest, ShapeMismatch) {
  Tape tape;
  EXPECT_THROW(gcn_layer(tape, Matrix::identity(3).to_tensor(), Tensor::zeros({3, 2}),
                         Tensor::zeros({3, 1}), Activation::kRelu),
               DimensionError);
}

TEST(AttentionTest, Examples) {
  Tape tape;
  Rng rng(1);
  Tensor l = Matrix::identity(4).to_tensor();
  Tensor x = random_tensor(rng, {4, 3}, false);
  for (double s : values(attention_scores(tape, l, x, Tensor::zeros({3, 1})))) EXPECT_EQ(s, 0.0);
  Tensor one = attention_scores(tape, Tensor::matrix({{1}}), Tensor::matrix({{0.7}}),
                                Tensor::matrix({{-1.3}}));
  EXPECT_DOUBLE_EQ(one.item(), std::tanh(0.7 * -1.3));
  EXPECT_THROW(attention_scores(tape, l, x, Tensor::zeros({3, 2})), DimensionError);
}

TEST(AttentionTest, ScoresAreBounded) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    Tape tape;
    Tensor x = random_tensor(rng, {6, 4}, false);
    for (double& v : x.mutable_data()) v *= 3;
    Tensor s = attention_scores(tape, Matrix::identity(6).to_tensor(), x,
                                random_tensor(rng, {4, 1}, false));
    for (double v : values(s)) {
      EXPECT_GT(v, -1.0);
      EXPECT_LT(v, 1.0);
    }
  }
}

TEST(TopRankTest, Examples) {
  const std::vector<double> s1{0.9, 0.1, 0.5, 0.7};
  EXPECT_EQ(top_rank(s1, 0.5), (std::vector<std::size_t>{0, 3}));
  const std::vector<double> s2{0.5, 0.5, 0.1};
  EXPECT_EQ(top_rank(s2, 1.0 / 3.0), (std::vector<std::size_t>{0}));
  EXPECT_EQ(top_rank(s1, 1.0), (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_THROW(top_rank(s1, 0.0), ConfigError);
  EXPECT_THROW(top_rank(s1, 1.5), ConfigError);
}

TEST(TopRankTest, PooledCountIsCeiling) {
  EXPECT_EQ(pooled_count(0.5, 62), 31u);
  EXPECT_EQ(pooled_count(0.3, 10), 3u);
  EXPECT_EQ(pooled_count(0.1, 1), 1u);
  for (int ki = 1; ki <= 10; ++ki) {
    const double k = ki / 10.0;
    for (std::size_t n = 1; n <= 62; ++n) {
      // integer oracle: ceil(ki * n / 10)
      EXPECT_EQ(pooled_count(k, n), (static_cast<std::size_t>(ki) * n + 9) / 10) << k << " " << n;
    }
  }
}

TEST(SagPoolTest, IdentityWhenKeepingEverything) {
  Tape tape;
  Rng rng(3);
  Tensor x = random_tensor(rng, {5, 2}, false);
  Matrix a(5, 5);
  for (double& v : a.values) v = rng.uniform();
  PoolResult r = sag_pool(tape, x, a, Tensor::matrix(5, 1, std::vector<double>(5, 1.0)), 1.0);
  EXPECT_EQ(values(r.features), values(x));
  EXPECT_EQ(r.adjacency, a);
}

TEST(SagPoolTest, KeepsAndScalesTopRows) {
  Tape tape;
  Tensor x = Tensor::matrix({{1, 2}, {3, 4}, {5, 6}, {7, 8}});
  Matrix a(4, 4);
  std::iota(a.values.begin(), a.values.end(), 0.0);
  PoolResult r = sag_pool(tape, x, a, column({0.9, 0.1, 0.5, 0.7}), 0.5);
  EXPECT_EQ(r.index, (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(values(r.features), (std::vector<double>{0.9, 1.8, 7 * 0.7, 8 * 0.7}));
  EXPECT_EQ(r.adjacency, Matrix(2, 2, {0, 3, 12, 15}));
  EXPECT_EQ(r.scores, (std::vector<double>{0.9, 0.7}));
}

TEST(SagPoolTest, ExactCountAndPrincipalSubmatrix) {
  Rng rng(19);
  for (int ki = 1; ki <= 10; ++ki) {
    for (std::size_t n = 1; n <= 62; ++n) {
      Tape tape(false);
      Tensor x = random_tensor(rng, {n, 2}, false);
      Matrix a(n, n);
      for (double& v : a.values) v = rng.uniform();
      Tensor s = random_tensor(rng, {n, 1}, false);
      PoolResult r = sag_pool(tape, x, a, s, ki / 10.0);
      ASSERT_EQ(r.index.size(), (static_cast<std::size_t>(ki) * n + 9) / 10);
      for (std::size_t i = 1; i < r.index.size(); ++i) EXPECT_LT(r.index[i - 1], r.index[i]);
      for (std::size_t i = 0; i < r.index.size(); ++i) {
        for (std::size_t j = 0; j < r.index.size(); ++j) {
          EXPECT_EQ(r.adjacency(i, j), a(r.index[i], r.index[j]));
        }
      }
    }
  }
}

TEST(SagPoolTest, GradientReachesAttentionWeights) {
  Rng rng(4);
  Tensor l = Matrix::identity(4).to_tensor();
  Tensor x = random_tensor(rng, {4, 3}, false);
  std::vector<Tensor> in{random_tensor(rng, {3, 1})};
  Matrix a(4, 4);
  std::vector<std::size_t> index;
  {
    Tape t(false);
    index = sag_pool(t, x, a, attention_scores(t, l, x, in[0]), 0.5).index;
  }
  ScalarFunction f = [&](Tape& t) {
    return ops::sum_all(t, sag_pool(t, x, a, attention_scores(t, l, x, in[0]), 0.5, &index).features);
  };
  Tape tape;
  tape.backward(f(tape));
  double mag = 0.0;
  for (double g : in[0].grad()) mag += std::abs(g);
  EXPECT_GT(mag, 1e-6);
  EXPECT_LT(grad_check(f, in).max_relative_error, 1e-4);
}

TEST(ReadoutTest, Examples) {
  Tape tape;
  EXPECT_EQ(values(readout(tape, Tensor::matrix({{1, 2}, {3, 4}}))),
            (std::vector<double>{2, 3, 3, 4}));
  EXPECT_EQ(values(readout(tape, Tensor::matrix({{5}}))), (std::vector<double>{5, 5}));
}

TEST(ReadoutTest, RowPermutationInvariant) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    Tape tape;
    Tensor x = random_tensor(rng, {6, 3}, false);
    std::vector<std::size_t> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span(perm));
    const auto a = values(readout(tape, x));
    const auto b = values(readout(tape, ops::gather_rows(tape, x, perm)));
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
  }
}

TEST(GradReverseTest, ForwardIdentityBackwardNegated) {
  Tensor x = Tensor::vector({0.1, -2.5, 3.0}, true);
  Tensor w = Tensor::vector({1.0, 2.0, -4.0});
  for (double lambda : {1.0, 0.0, 0.3}) {
    x.zero_grad();
    Tape tape;
    Tensor y = grad_reverse(tape, x, lambda);
    EXPECT_EQ(values(y), values(x));
    tape.backward(ops::sum_all(tape, ops::mul(tape, y, w)));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(x.grad()[i], -lambda * w.at(i));
  }
  Tape tape;
  EXPECT_THROW(grad_reverse(tape, x, -0.1), ConfigError);
}

ModelConfig tiny_config() {
  ModelConfig c;
  c.in_features = 3;
  c.classes = 2;
  c.gcn_widths = {4, 4, 4};
  c.emotion_hidden = {5, 3};
  c.domain_hidden = {3};
  c.pool_ratio = 0.5;
  return c;
}

GraphContext tiny_graph() {
  std::vector<Electrode> e{{"A", 1, 0, 0}, {"B", 0, 1, 0}, {"C", -1, 0, 0}, {"D", 0, 0, 1}};
  return GraphContext::from_adjacency(build_adjacency(ElectrodeLayout(e), 0.8).matrix);
}

TEST(ModelParamsTest, RegistryIsExhaustiveAndDisjoint) {
  ModelParams p = ModelParams::initialize(ModelConfig{}, 1);
  const auto named = p.named();
  std::set<std::string> names;
  std::size_t feature = 0, emotion = 0, domain = 0;
  for (const auto& n : named) {
    EXPECT_TRUE(names.insert(n.name).second) << n.name;
    feature += n.group == ParamGroup::kFeature;
    emotion += n.group == ParamGroup::kEmotion;
    domain += n.group == ParamGroup::kDomain;
    for (double v : n.value.data()) EXPECT_TRUE(std::isfinite(v));
  }
  EXPECT_EQ(feature, 4u);      // three GCN layers + attention
  EXPECT_EQ(emotion, 6u);      // three layers, weight + bias
  EXPECT_EQ(domain, 4u);       // two layers
  EXPECT_EQ(p.group(ParamGroup::kFeature).size() + p.group(ParamGroup::kEmotion).size() +
                p.group(ParamGroup::kDomain).size(),
            named.size());
  EXPECT_EQ(p.emotion.back().weight.cols(), 3u);
  EXPECT_EQ(p.domain.back().weight.cols(), 2u);
  EXPECT_EQ(p.emotion.front().weight.rows(), 128u);  // 2F readout
}

TEST(ModelParamsTest, GlorotBoundsAndZeroBiases) {
  ModelParams p = ModelParams::initialize(ModelConfig{}, 5);
  for (const auto& n : p.named()) {
    if (n.name.ends_with(".bias")) {
      for (double v : n.value.data()) EXPECT_EQ(v, 0.0);
    } else {
      const double limit = std::sqrt(6.0 / static_cast<double>(n.value.rows() + n.value.cols()));
      for (double v : n.value.data()) EXPECT_LE(std::abs(v), limit);
    }
  }
}

TEST(ForwardTest, ProbabilitiesAndPoolSize) {
  ModelConfig c;
  ModelParams p = ModelParams::initialize(c, 3);
  const ElectrodeLayout layout = standard_62_layout();
  GraphContext g = GraphContext::from_adjacency(build_adjacency(layout, kDefaultSigma).matrix);
  Rng rng(2);
  std::vector<Matrix> xs(3, Matrix(62, 5));
  for (auto& x : xs) for (double& v : x.values) v = rng.uniform(0, 2);
  std::vector<const Matrix*> batch;
  for (auto& x : xs) batch.push_back(&x);
  Tape tape;
  ForwardResult r = forward(tape, p, g, batch, {});
  ASSERT_EQ(r.emotion_probs.shape(), (Shape{3, 3}));
  ASSERT_TRUE(r.domain_probs);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(r.emotion_probs.at(i, 0) + r.emotion_probs.at(i, 1) + r.emotion_probs.at(i, 2), 1.0, 1e-9);
    EXPECT_NEAR(r.domain_probs->at(i, 0) + r.domain_probs->at(i, 1), 1.0, 1e-9);
    EXPECT_EQ(r.pools[i].index.size(), 31u);
  }
}

TEST(ForwardTest, ZeroedFinalEmotionLayerGivesUniformProbabilities) {
  ModelParams p = ModelParams::initialize(tiny_config(), 9);
  for (double& v : p.emotion.back().weight.mutable_data()) v = 0.0;
  GraphContext g = tiny_graph();
  Matrix x(4, 3, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2});
  const Matrix* batch[] = {&x};
  Tape tape;
  ForwardResult r = forward(tape, p, g, batch, {});
  EXPECT_EQ(r.emotion_probs.at(0, 0), 0.5);
  EXPECT_EQ(r.emotion_probs.at(0, 1), 0.5);
}

TEST(ForwardTest, RejectsMismatchedSamples) {
  ModelParams p = ModelParams::initialize(tiny_config(), 9);
  GraphContext g = tiny_graph();
  Matrix x(5, 3);
  const Matrix* batch[] = {&x};
  Tape tape;
  EXPECT_THROW(forward(tape, p, g, batch, {}), DimensionError);
}

struct TinyProblem {
  GraphContext graph = tiny_graph();
  ModelParams params;
  std::vector<Matrix> xs;
  std::vector<const Matrix*> batch;
  std::vector<std::vector<std::size_t>> frozen;
  std::vector<int> labels{0, 1};  // rows 0-1 are source, row 2 is target

  explicit TinyProblem(std::uint64_t seed)
      : params(ModelParams::initialize(tiny_config(), seed)), xs(3, Matrix(4, 3)) {
    Rng rng(seed + 1000);
    for (auto& l : params.emotion) for (double& v : l.bias.mutable_data()) v = rng.uniform(-0.1, 0.1);
    for (auto& l : params.domain) for (double& v : l.bias.mutable_data()) v = rng.uniform(-0.1, 0.1);
    // positive inputs and mostly positive GCN weights keep units active, so
    // max readout ties between dead units do not reject every point
    for (auto& w : params.gcn) for (double& v : w.mutable_data()) v = rng.uniform(-0.3, 1.0);
    for (auto& x : xs) for (double& v : x.values) v = rng.uniform(0.0, 1.0);
    for (auto& x : xs) batch.push_back(&x);
    Tape t(false);
    for (const auto& pool : forward(t, params, graph, batch, {}).pools) frozen.push_back(pool.index);
  }

  // L_y on the source rows and/or L_d on both domains.
  Tensor loss(Tape& t, DomainMode mode, double lambda, bool emotion, bool domain) const {
    ForwardOptions opt;
    opt.domain = mode;
    opt.lambda = lambda;
    opt.frozen_index = &frozen;
    ForwardResult r = forward(t, params, graph, batch, opt);
    const std::vector<std::size_t> src{0, 1}, tgt{2};
    Tensor ly = emotion_loss_kl(t, one_hot(labels, 2), ops::gather_rows(t, r.emotion_probs, src));
    Tensor ld = domain_loss(t, ops::gather_rows(t, *r.domain_probs, src),
                            ops::gather_rows(t, *r.domain_probs, tgt));
    if (emotion && domain) return total_loss(t, ly, ld);
    return emotion ? ly : ld;
  }
};

// Jittered inputs with the top-k selection frozen, so the network is smooth
// in every parameter around the sampled point.
TEST(ForwardTest, EndToEndGradientCheck) {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 100; ++seed) {
    ASSERT_LT(seed, 1000u);
    TinyProblem prob(seed);
    std::vector<Tensor> params = prob.params.tensors();
    ScalarFunction f = [&](Tape& t) {
      return prob.loss(t, DomainMode::kJoint, 1.0, true, true);
    };
    try {
      EXPECT_LT(grad_check(f, params).max_relative_error, 1e-4) << "seed " << seed;
      ++checked;
    } catch (const ContractError&) {
      // relu or max tie too close to the sampled point
    }
  }
}

std::vector<double> gradient(TinyProblem& prob, DomainMode mode, double lambda, bool emotion,
                             bool domain) {
  prob.params.zero_grad();
  Tape t;
  t.backward(prob.loss(t, mode, lambda, emotion, domain));
  std::vector<double> g;
  for (const Tensor& p : prob.params.tensors()) {
    if (p.has_grad()) g.insert(g.end(), p.grad().begin(), p.grad().end());
    else g.insert(g.end(), p.numel(), 0.0);
  }
  prob.params.zero_grad();
  return g;
}

// Under reversal, feature-extractor gradients are dL_y - lambda * dL_d while
// the domain head still descends dL_d. dL_y and dL_d come from the plain
// joint objective, whose gradients are finite-difference checked above.
TEST(ForwardTest, ReversedGradientIsEmotionMinusLambdaDomain) {
  const double lambda = 0.7;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TinyProblem prob(seed);
    const auto gy = gradient(prob, DomainMode::kJoint, 1.0, true, false);
    const auto gd = gradient(prob, DomainMode::kJoint, 1.0, false, true);
    const auto rev = gradient(prob, DomainMode::kReversed, lambda, true, true);
    std::size_t offset = 0;
    for (const auto& n : prob.params.named()) {
      const double sign = n.group == ParamGroup::kFeature ? -lambda : 1.0;
      for (std::size_t i = 0; i < n.value.numel(); ++i, ++offset) {
        EXPECT_NEAR(rev[offset], gy[offset] + sign * gd[offset], 1e-12) << n.name;
      }
    }
  }
}

TEST(ForwardTest, DeterministicForFixedParams) {
  TinyProblem a(3), b(3);
  Tape ta, tb;
  EXPECT_EQ(values(a.loss(ta, DomainMode::kReversed, 1.0, true, true)),
            values(b.loss(tb, DomainMode::kReversed, 1.0, true, true)));
  EXPECT_EQ(gradient(a, DomainMode::kReversed, 1.0, true, true),
            gradient(b, DomainMode::kReversed, 1.0, true, true));
}

}  // namespace
}  // namespace dagam
