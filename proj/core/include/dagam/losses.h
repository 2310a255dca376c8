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

#ifndef DAGAM_LOSSES_H_
#define DAGAM_LOSSES_H_

#include <cstddef>
#include <span>

#include "dagam/tensor.h"

namespace dagam {

// Throws ContractError unless every row of `probs` sums to 1 within 1e-6.
void check_probability_rows(const Tensor& probs, const char* what);

// G x classes indicator matrix.
Tensor one_hot(std::span<const int> labels, std::size_t classes);

// Mean over rows of -sum_j target_ij ln probs_ij.
Tensor cross_entropy(Tape& tape, const Tensor& target, const Tensor& probs);

// Mean over rows of sum_j target_ij (ln target_ij - ln probs_ij), with
// 0 ln 0 taken as 0. For one-hot targets this is -ln probs_true.
Tensor emotion_loss_kl(Tape& tape, const Tensor& target, const Tensor& probs);

// Domain discrimination loss: source rows carry label [1, 0], target rows
// [0, 1]. Cross-entropy is averaged within each domain, then summed.
Tensor domain_loss(Tape& tape, const Tensor& source_probs, const Tensor& target_probs);

// L_y + L_d. The adversarial sign lives in the gradient reversal layer.
Tensor total_loss(Tape& tape, const Tensor& emotion, const Tensor& domain);

}  // namespace dagam

#endif  // DAGAM_LOSSES_H_
