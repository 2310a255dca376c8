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

#ifndef DAGAM_MATRIX_H_
#define DAGAM_MATRIX_H_

#include <cstddef>
#include <vector>

#include "dagam/tensor.h"

namespace dagam {

// Plain row-major matrix value for non-differentiable data (adjacency,
// signals, feature windows).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), values(r * c, fill) {}
  Matrix(std::size_t r, std::size_t c, std::vector<double> v)
      : rows(r), cols(c), values(std::move(v)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  Tensor to_tensor(bool requires_grad = false) const {
    return Tensor::matrix(rows, cols, values, requires_grad);
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

}  // namespace dagam

#endif  // DAGAM_MATRIX_H_
