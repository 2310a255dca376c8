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

#ifndef DAGAM_GRAD_CHECK_H_
#define DAGAM_GRAD_CHECK_H_

#include <cstddef>
#include <functional>
#include <span>

#include "dagam/tensor.h"

namespace dagam {

// Builds a scalar from tensors captured by the closure, recording on `tape`.
using ScalarFunction = std::function<Tensor(Tape& tape)>;

struct GradCheckOptions {
  double step = 1e-4;
  // Points whose nearest relu/max/clamp kink lies within
  // kink_margin_steps * step are rejected.
  double kink_margin_steps = 10.0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_input = 0;
  std::size_t worst_index = 0;
};

// Compares reverse-mode gradients of `f` with respect to `inputs` against
// central finite differences. The error for one coordinate is
// |analytic - numeric| / max(1, |numeric|); the maximum is returned.
//
// Throws ContractError when f is not scalar or the point is too close to a
// non-smooth kink, and when either gradient is NaN (naming the coordinate).
// Input values are restored before returning.
GradCheckResult grad_check(const ScalarFunction& f, std::span<Tensor> inputs,
                           const GradCheckOptions& options = {});

}  // namespace dagam

#endif  // DAGAM_GRAD_CHECK_H_
