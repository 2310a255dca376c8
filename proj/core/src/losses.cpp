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

#include "dagam/losses.h"

#include <cmath>
#include <string>

#include "dagam/errors.h"
#include "dagam/ops.h"

namespace dagam {

void check_probability_rows(const Tensor& probs, const char* what) {
  if (probs.rank() != 2) {
    throw DimensionError(std::string(what) + " must be a matrix, got " +
                         shape_string(probs.shape()));
  }
  const std::size_t n = probs.cols();
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += probs.at(i, j);
    if (!(std::abs(total - 1.0) <= 1e-6)) {
      throw ContractError(std::string(what) + " row " + std::to_string(i) + " sums to " +
                          std::to_string(total));
    }
  }
}

Tensor one_hot(std::span<const int> labels, std::size_t classes) {
  Tensor out = Tensor::zeros({labels.size(), classes});
  auto data = out.mutable_data();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= classes) {
      throw DataError("label " + std::to_string(labels[i]) + " outside [0, " +
                      std::to_string(classes) + ")");
    }
    data[i * classes + static_cast<std::size_t>(labels[i])] = 1.0;
  }
  return out;
}

Tensor cross_entropy(Tape& tape, const Tensor& target, const Tensor& probs) {
  check_probability_rows(target, "target");
  check_probability_rows(probs, "probabilities");
  if (target.shape() != probs.shape()) {
    throw DimensionError("target " + shape_string(target.shape()) + " vs probabilities " +
                         shape_string(probs.shape()));
  }
  Tensor weighted = ops::mul(tape, target, ops::log(tape, probs));
  return ops::scale(tape, ops::sum_all(tape, weighted),
                    -1.0 / static_cast<double>(probs.rows()));
}

Tensor emotion_loss_kl(Tape& tape, const Tensor& target, const Tensor& probs) {
  Tensor ce = cross_entropy(tape, target, probs);
  double neg_entropy = 0.0;
  for (double t : target.data()) {
    if (t > 0.0) neg_entropy += t * std::log(t);
  }
  if (neg_entropy == 0.0) return ce;
  return ops::add(tape, ce,
                  Tensor::scalar(neg_entropy / static_cast<double>(target.rows())));
}

Tensor domain_loss(Tape& tape, const Tensor& source_probs, const Tensor& target_probs) {
  check_probability_rows(source_probs, "source domain probabilities");
  check_probability_rows(target_probs, "target domain probabilities");
  if (source_probs.cols() != 2 || target_probs.cols() != 2) {
    throw DimensionError("domain probabilities need two columns");
  }
  std::vector<int> source_labels(source_probs.rows(), 0);
  std::vector<int> target_labels(target_probs.rows(), 1);
  Tensor source = cross_entropy(tape, one_hot(source_labels, 2), source_probs);
  Tensor target = cross_entropy(tape, one_hot(target_labels, 2), target_probs);
  return ops::add(tape, source, target);
}

Tensor total_loss(Tape& tape, const Tensor& emotion, const Tensor& domain) {
  if (emotion.numel() != 1 || domain.numel() != 1) {
    throw ContractError("total_loss expects scalar losses");
  }
  return ops::add(tape, emotion, domain);
}

}  // namespace dagam
