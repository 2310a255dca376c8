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

#include "dagam/grad_check.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dagam/errors.h"

namespace dagam {
namespace {

double evaluate(const ScalarFunction& f) {
  Tape tape(/*recording=*/false);
  return f(tape).item();
}

}  // namespace

GradCheckResult grad_check(const ScalarFunction& f, std::span<Tensor> inputs,
                           const GradCheckOptions& options) {
  const double h = options.step;
  std::vector<bool> previous(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    previous[i] = inputs[i].requires_grad();
    inputs[i].set_requires_grad(true);
    inputs[i].zero_grad();
  }
  auto restore_flags = [&] {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      inputs[i].set_requires_grad(previous[i]);
    }
  };

  Tape tape;
  Tensor loss = f(tape);
  if (tape.kink_seen() && tape.min_kink_distance() <= options.kink_margin_steps * h) {
    restore_flags();
    throw ContractError("gradient check point lies within " +
                        std::to_string(tape.min_kink_distance()) +
                        " of a non-smooth kink");
  }
  tape.backward(loss);

  GradCheckResult result;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    std::vector<double> analytic(inputs[k].numel(), 0.0);
    if (inputs[k].has_grad()) {
      const auto g = inputs[k].grad();
      std::copy(g.begin(), g.end(), analytic.begin());
    }
    auto values = inputs[k].mutable_data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + h;
      const double up = evaluate(f);
      values[i] = saved - h;
      const double down = evaluate(f);
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      if (std::isnan(numeric) || std::isnan(analytic[i])) {
        restore_flags();
        throw ContractError("NaN gradient at input " + std::to_string(k) +
                            ", coordinate " + std::to_string(i));
      }
      const double err =
          std::abs(analytic[i] - numeric) / std::max(1.0, std::abs(numeric));
      if (err > result.max_relative_error) {
        result = {err, k, i};
      }
    }
  }
  restore_flags();
  return result;
}

}  // namespace dagam
