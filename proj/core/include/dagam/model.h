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

#ifndef DAGAM_MODEL_H_
#define DAGAM_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dagam/matrix.h"
#include "dagam/tensor.h"

namespace dagam {

struct ModelConfig {
  std::size_t in_features = 5;
  std::size_t classes = 3;
  std::vector<std::size_t> gcn_widths{64, 64, 64};
  std::vector<std::size_t> emotion_hidden{64, 32};
  std::vector<std::size_t> domain_hidden{32};
  // Fraction of nodes kept by self-attention pooling.
  double pool_ratio = 0.5;
};

enum class ParamGroup { kFeature, kEmotion, kDomain };

const char* to_string(ParamGroup group);

struct Linear {
  Tensor weight;  // in x out
  Tensor bias;    // out
};

struct NamedParam {
  std::string name;
  ParamGroup group;
  Tensor value;
};

// Learned parameters: GCN stack and attention projection (feature extractor),
// the emotion classifier, and the domain classifier.
struct ModelParams {
  ModelConfig config;
  std::vector<Tensor> gcn;
  Tensor attention;  // F_last x 1
  std::vector<Linear> emotion;
  std::vector<Linear> domain;

  // Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  static ModelParams initialize(const ModelConfig& config, std::uint64_t seed);

  // Every parameter exactly once, in a stable order.
  std::vector<NamedParam> named() const;
  std::vector<Tensor> tensors() const;
  std::vector<Tensor> group(ParamGroup group) const;

  ModelParams clone() const;
  void zero_grad();
};

// Number of nodes kept for ratio k over n nodes: ceil(k * n), at least 1.
// A tolerance absorbs representation error so ceil(0.3 * 10) == 3.
std::size_t pooled_count(double ratio, std::size_t nodes);

enum class Activation { kIdentity, kRelu, kTanh };

// activation(L * X * W)
Tensor gcn_layer(Tape& tape, const Tensor& laplacian, const Tensor& x, const Tensor& weight,
                 Activation activation);

// tanh(L * X * W_att); W_att must have a single column.
Tensor attention_scores(Tape& tape, const Tensor& laplacian, const Tensor& x,
                        const Tensor& attention);

// Indices of the ceil(k * N) largest scores, ties toward the lower index,
// returned in ascending order.
std::vector<std::size_t> top_rank(std::span<const double> scores, double ratio);

struct PoolResult {
  Tensor features;                // M x F, rows scaled by their scores
  Matrix adjacency;               // principal submatrix A[index, index]
  std::vector<std::size_t> index; // ascending
  std::vector<double> scores;     // scores[index]
};

// Keeps the top-ranked nodes; with `frozen_index` the selection is taken as
// given instead of recomputed (used when differentiating through a fixed
// selection). The score multiplication is differentiable.
PoolResult sag_pool(Tape& tape, const Tensor& x, const Matrix& adjacency,
                    const Tensor& scores, double ratio,
                    const std::vector<std::size_t>* frozen_index = nullptr);

// [column means || column maxima] of an M x F matrix.
Tensor readout(Tape& tape, const Tensor& x);

// Identity forward; backward multiplies the incoming gradient by -lambda.
Tensor grad_reverse(Tape& tape, const Tensor& x, double lambda);

// x * W + b
Tensor linear(Tape& tape, const Tensor& x, const Linear& layer);

struct GraphContext {
  Matrix adjacency;
  Tensor laplacian;

  static GraphContext from_adjacency(const Matrix& adjacency);
};

enum class DomainMode {
  kOff,       // domain head not evaluated
  kReversed,  // gradient reversal with the given lambda
  kJoint,     // no reversal: plain joint minimisation
};

struct ForwardOptions {
  DomainMode domain = DomainMode::kReversed;
  double lambda = 1.0;
  // Per-sample pooling selections to reuse instead of recomputing.
  const std::vector<std::vector<std::size_t>>* frozen_index = nullptr;
};

struct ForwardResult {
  Tensor emotion_probs;  // G x C
  std::optional<Tensor> domain_probs;  // G x 2
  Tensor embeddings;     // G x 2F
  std::vector<PoolResult> pools;
};

// GCN stack (ReLU) -> attention scores -> pooling -> readout per graph, then
// the emotion head and (through gradient reversal) the domain head on the
// stacked readouts.
ForwardResult forward(Tape& tape, const ModelParams& params, const GraphContext& graph,
                      std::span<const Matrix* const> samples, const ForwardOptions& options);

}  // namespace dagam

#endif  // DAGAM_MODEL_H_
