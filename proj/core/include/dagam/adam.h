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

#ifndef DAGAM_ADAM_H_
#define DAGAM_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dagam/tensor.h"

namespace dagam {

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
};

// Zeroed moments shaped like `params`.
AdamState make_adam_state(std::span<const Tensor> params, double beta1 = 0.9,
                          double beta2 = 0.999, double epsilon = 1e-8);

// One bias-corrected Adam update using each parameter's gradient buffer. A
// parameter without a buffer is treated as having a zero gradient.
// Throws ConfigError for lr <= 0 and DimensionError when state and params
// disagree.
void adam_step(std::span<Tensor> params, AdamState& state, double lr);

}  // namespace dagam

#endif  // DAGAM_ADAM_H_
