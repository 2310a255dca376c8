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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dagam/errors.h"
#include "dagam/graph.h"
#include "dagam/ops.h"
#include "dagam/random.h"

namespace dagam {
namespace {

Tensor glorot(Rng& rng, std::size_t fan_in, std::size_t fan_out) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::vector<double> values(fan_in * fan_out);
  for (double& v : values) v = rng.uniform(-limit, limit);
  return Tensor::matrix(fan_in, fan_out, std::move(values), true);
}

Linear make_linear(Rng& rng, std::size_t in, std::size_t out) {
  return {glorot(rng, in, out), Tensor::zeros({out}, true)};
}

void validate(const ModelConfig& config) {
  if (config.in_features == 0) throw ConfigError("model needs at least one input feature");
  if (config.classes < 2) throw ConfigError("model needs at least two classes");
  if (config.gcn_widths.empty()) throw ConfigError("model needs at least one GCN layer");
  if (!(config.pool_ratio > 0.0 && config.pool_ratio <= 1.0)) {
    throw ConfigError("pooling ratio must lie in (0, 1]");
  }
  auto positive = [](const std::vector<std::size_t>& widths) {
    return std::all_of(widths.begin(), widths.end(), [](std::size_t w) { return w > 0; });
  };
  if (!positive(config.gcn_widths) || !positive(config.emotion_hidden) ||
      !positive(config.domain_hidden)) {
    throw ConfigError("layer widths must be positive");
  }
}

std::vector<Linear> make_head(Rng& rng, std::size_t in, const std::vector<std::size_t>& hidden,
                              std::size_t out) {
  std::vector<Linear> layers;
  std::size_t width = in;
  for (std::size_t h : hidden) {
    layers.push_back(make_linear(rng, width, h));
    width = h;
  }
  layers.push_back(make_linear(rng, width, out));
  return layers;
}

Tensor run_head(Tape& tape, const Tensor& input, const std::vector<Linear>& layers) {
  Tensor h = input;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    h = linear(tape, h, layers[i]);
    if (i + 1 < layers.size()) h = ops::relu(tape, h);
  }
  return ops::softmax_rows(tape, h);
}

}  // namespace

const char* to_string(ParamGroup group) {
  switch (group) {
    case ParamGroup::kFeature: return "feature";
    case ParamGroup::kEmotion: return "emotion";
    case ParamGroup::kDomain: return "domain";
  }
  return "unknown";
}

ModelParams ModelParams::initialize(const ModelConfig& config, std::uint64_t seed) {
  validate(config);
  Rng rng(seed);
  ModelParams p;
  p.config = config;
  std::size_t width = config.in_features;
  for (std::size_t w : config.gcn_widths) {
    p.gcn.push_back(glorot(rng, width, w));
    width = w;
  }
  p.attention = glorot(rng, width, 1);
  p.emotion = make_head(rng, 2 * width, config.emotion_hidden, config.classes);
  p.domain = make_head(rng, 2 * width, config.domain_hidden, 2);
  return p;
}

std::vector<NamedParam> ModelParams::named() const {
  std::vector<NamedParam> out;
  for (std::size_t i = 0; i < gcn.size(); ++i) {
    out.push_back({"gcn." + std::to_string(i) + ".weight", ParamGroup::kFeature, gcn[i]});
  }
  out.push_back({"attention.weight", ParamGroup::kFeature, attention});
  auto add_head = [&out](const std::string& prefix, ParamGroup group,
                         const std::vector<Linear>& layers) {
    for (std::size_t i = 0; i < layers.size(); ++i) {
      out.push_back({prefix + "." + std::to_string(i) + ".weight", group, layers[i].weight});
      out.push_back({prefix + "." + std::to_string(i) + ".bias", group, layers[i].bias});
    }
  };
  add_head("emotion", ParamGroup::kEmotion, emotion);
  add_head("domain", ParamGroup::kDomain, domain);
  return out;
}

std::vector<Tensor> ModelParams::tensors() const {
  std::vector<Tensor> out;
  for (auto& p : named()) out.push_back(p.value);
  return out;
}

std::vector<Tensor> ModelParams::group(ParamGroup which) const {
  std::vector<Tensor> out;
  for (auto& p : named()) {
    if (p.group == which) out.push_back(p.value);
  }
  return out;
}

ModelParams ModelParams::clone() const {
  ModelParams p;
  p.config = config;
  for (const Tensor& w : gcn) p.gcn.push_back(w.clone());
  p.attention = attention.clone();
  for (const Linear& l : emotion) p.emotion.push_back({l.weight.clone(), l.bias.clone()});
  for (const Linear& l : domain) p.domain.push_back({l.weight.clone(), l.bias.clone()});
  return p;
}

void ModelParams::zero_grad() {
  for (Tensor t : tensors()) t.zero_grad();
}

std::size_t pooled_count(double ratio, std::size_t nodes) {
  const double exact = ratio * static_cast<double>(nodes);
  const auto count = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return std::clamp<std::size_t>(count, 1, std::max<std::size_t>(nodes, 1));
}

Tensor gcn_layer(Tape& tape, const Tensor& laplacian, const Tensor& x, const Tensor& weight,
                 Activation activation) {
  // associate so the N x N product runs over the narrower side
  Tensor h = x.cols() < weight.cols()
                 ? ops::matmul(tape, ops::matmul(tape, laplacian, x), weight)
                 : ops::matmul(tape, laplacian, ops::matmul(tape, x, weight));
  switch (activation) {
    case Activation::kIdentity: return h;
    case Activation::kRelu: return ops::relu(tape, h);
    case Activation::kTanh: return ops::tanh(tape, h);
  }
  return h;
}

Tensor attention_scores(Tape& tape, const Tensor& laplacian, const Tensor& x,
                        const Tensor& attention) {
  if (attention.rank() != 2 || attention.cols() != 1) {
    throw DimensionError("attention weight must have one column, got " +
                         shape_string(attention.shape()));
  }
  return gcn_layer(tape, laplacian, x, attention, Activation::kTanh);
}

std::vector<std::size_t> top_rank(std::span<const double> scores, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw ConfigError("pooling ratio must lie in (0, 1]");
  if (scores.empty()) throw DegenerateInputError("top_rank over no nodes");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(pooled_count(ratio, scores.size()));
  std::sort(order.begin(), order.end());
  return order;
}

PoolResult sag_pool(Tape& tape, const Tensor& x, const Matrix& adjacency, const Tensor& scores,
                    double ratio, const std::vector<std::size_t>* frozen_index) {
  if (x.rank() != 2) throw DimensionError("pooling expects node features as a matrix");
  const std::size_t n = x.rows();
  if (scores.rank() != 2 || scores.rows() != n || scores.cols() != 1) {
    throw DimensionError("scores " + shape_string(scores.shape()) + " do not match " +
                         std::to_string(n) + " nodes");
  }
  if (adjacency.rows != n || adjacency.cols != n) {
    throw DimensionError("adjacency is " + std::to_string(adjacency.rows) + "x" +
                         std::to_string(adjacency.cols) + " for " + std::to_string(n) +
                         " nodes");
  }
  PoolResult result;
  result.index = frozen_index ? *frozen_index : top_rank(scores.data(), ratio);
  const std::size_t m = result.index.size();
  for (std::size_t i : result.index) result.scores.push_back(scores.at(i));
  result.adjacency = Matrix(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      result.adjacency(a, b) = adjacency(result.index[a], result.index[b]);
    }
  }
  Tensor kept = ops::gather_rows(tape, x, result.index);
  Tensor mask = ops::gather_rows(tape, scores, result.index);
  result.features = ops::mul(tape, kept, mask);
  return result;
}

Tensor readout(Tape& tape, const Tensor& x) {
  if (x.rank() != 2) throw DimensionError("readout expects a matrix");
  const Tensor parts[] = {ops::mean(tape, x, 0), ops::max(tape, x, 0)};
  return ops::concat(tape, parts);
}

Tensor grad_reverse(Tape& tape, const Tensor& x, double lambda) {
  if (!(lambda >= 0.0)) throw ConfigError("gradient reversal lambda must be >= 0");
  const bool track = tape.recording() && x.requires_grad();
  Tensor out(x.shape(), std::vector<double>(x.data().begin(), x.data().end()), track);
  if (track) {
    tape.record({x}, out, [x, out, lambda]() mutable {
      const auto g = out.grad();
      auto gx = x.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += -lambda * g[i];
    });
  }
  return out;
}

Tensor linear(Tape& tape, const Tensor& x, const Linear& layer) {
  return ops::add(tape, ops::matmul(tape, x, layer.weight), layer.bias);
}

GraphContext GraphContext::from_adjacency(const Matrix& adjacency) {
  return {adjacency, renormalized_laplacian(adjacency).to_tensor()};
}

ForwardResult forward(Tape& tape, const ModelParams& params, const GraphContext& graph,
                      std::span<const Matrix* const> samples, const ForwardOptions& options) {
  if (samples.empty()) throw DegenerateInputError("forward over an empty batch");
  if (options.frozen_index && options.frozen_index->size() != samples.size()) {
    throw DimensionError("frozen pooling selections do not match the batch");
  }
  const std::size_t n = graph.adjacency.rows;
  ForwardResult result;
  std::vector<Tensor> embeddings;
  embeddings.reserve(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Matrix& x = *samples[s];
    if (x.rows != n || x.cols != params.config.in_features) {
      throw DimensionError("sample is " + std::to_string(x.rows) + "x" +
                           std::to_string(x.cols) + ", model expects " + std::to_string(n) +
                           "x" + std::to_string(params.config.in_features));
    }
    Tensor h = x.to_tensor();
    for (const Tensor& w : params.gcn) {
      h = gcn_layer(tape, graph.laplacian, h, w, Activation::kRelu);
    }
    Tensor scores = attention_scores(tape, graph.laplacian, h, params.attention);
    PoolResult pool =
        sag_pool(tape, h, graph.adjacency, scores, params.config.pool_ratio,
                 options.frozen_index ? &(*options.frozen_index)[s] : nullptr);
    embeddings.push_back(readout(tape, pool.features));
    result.pools.push_back(std::move(pool));
  }
  result.embeddings = ops::stack_rows(tape, embeddings);
  result.emotion_probs = run_head(tape, result.embeddings, params.emotion);
  switch (options.domain) {
    case DomainMode::kOff:
      break;
    case DomainMode::kReversed:
      result.domain_probs =
          run_head(tape, grad_reverse(tape, result.embeddings, options.lambda), params.domain);
      break;
    case DomainMode::kJoint:
      result.domain_probs = run_head(tape, result.embeddings, params.domain);
      break;
  }
  return result;
}

}  // namespace dagam
