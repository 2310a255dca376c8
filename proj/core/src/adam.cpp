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

#include "dagam/adam.h"

#include <cmath>
#include <string>

#include "dagam/errors.h"

namespace dagam {

AdamState make_adam_state(std::span<const Tensor> params, double beta1,
                          double beta2, double epsilon) {
  AdamState state;
  state.beta1 = beta1;
  state.beta2 = beta2;
  state.epsilon = epsilon;
  for (const Tensor& p : params) {
    state.m.emplace_back(p.numel(), 0.0);
    state.v.emplace_back(p.numel(), 0.0);
  }
  return state;
}

void adam_step(std::span<Tensor> params, AdamState& state, double lr) {
  if (!(lr > 0.0)) throw ConfigError("learning rate must be positive");
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw DimensionError("Adam state tracks " + std::to_string(state.m.size()) +
                         " parameters, got " + std::to_string(params.size()));
  }
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor& p = params[k];
    auto& m = state.m[k];
    auto& v = state.v[k];
    if (m.size() != p.numel() || v.size() != p.numel()) {
      throw DimensionError("Adam moments do not match parameter " +
                           shape_string(p.shape()));
    }
    const auto g = p.grad();
    auto w = p.mutable_data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g.empty() ? 0.0 : g[i];
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * gi;
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * gi * gi;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      w[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

}  // namespace dagam
