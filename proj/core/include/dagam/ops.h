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

#ifndef DAGAM_OPS_H_
#define DAGAM_OPS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "dagam/tensor.h"

// Differentiable operators. Each one computes its forward value eagerly and,
// when the tape is recording and some input requires a gradient, appends a
// backward rule to the tape. Binary operators broadcast NumPy-style by
// aligning trailing dimensions.
namespace dagam::ops {

// Arguments of log() are clamped below at this value.
inline constexpr double kLogFloor = 1e-12;

enum class UnaryKind { kRelu, kTanh, kExp, kLog };
enum class BinaryKind { kAdd, kSub, kMul };
enum class ReduceKind { kSum, kMean, kMax };

Shape broadcast_shape(const Shape& a, const Shape& b);

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b);

Tensor unary(Tape& tape, UnaryKind kind, const Tensor& x);
Tensor binary(Tape& tape, BinaryKind kind, const Tensor& a, const Tensor& b);

inline Tensor relu(Tape& t, const Tensor& x) { return unary(t, UnaryKind::kRelu, x); }
inline Tensor tanh(Tape& t, const Tensor& x) { return unary(t, UnaryKind::kTanh, x); }
inline Tensor exp(Tape& t, const Tensor& x) { return unary(t, UnaryKind::kExp, x); }
inline Tensor log(Tape& t, const Tensor& x) { return unary(t, UnaryKind::kLog, x); }
inline Tensor add(Tape& t, const Tensor& a, const Tensor& b) {
  return binary(t, BinaryKind::kAdd, a, b);
}
inline Tensor sub(Tape& t, const Tensor& a, const Tensor& b) {
  return binary(t, BinaryKind::kSub, a, b);
}
inline Tensor mul(Tape& t, const Tensor& a, const Tensor& b) {
  return binary(t, BinaryKind::kMul, a, b);
}

// Pointwise clamp to [lo, hi]; gradient is zero outside the interval.
Tensor clamp(Tape& tape, const Tensor& x, double lo, double hi);

Tensor scale(Tape& tape, const Tensor& x, double factor);

// Reduces along `axis`, removing it from the shape. kMax routes the gradient
// to the first maximal element along the axis.
Tensor reduce(Tape& tape, ReduceKind kind, const Tensor& x, std::size_t axis);

inline Tensor sum(Tape& t, const Tensor& x, std::size_t axis) {
  return reduce(t, ReduceKind::kSum, x, axis);
}
inline Tensor mean(Tape& t, const Tensor& x, std::size_t axis) {
  return reduce(t, ReduceKind::kMean, x, axis);
}
inline Tensor max(Tape& t, const Tensor& x, std::size_t axis) {
  return reduce(t, ReduceKind::kMax, x, axis);
}

// Sum of all elements as a rank-0 tensor.
Tensor sum_all(Tape& tape, const Tensor& x);

// Row-wise softmax of an m x n matrix with row-max subtraction.
Tensor softmax_rows(Tape& tape, const Tensor& x);

// Rows `index` of a matrix, in the given order.
Tensor gather_rows(Tape& tape, const Tensor& x, std::span<const std::size_t> index);

// Concatenates rank-1 tensors end to end.
Tensor concat(Tape& tape, std::span<const Tensor> parts);

// Stacks equal-length rank-1 tensors into a matrix, one per row.
Tensor stack_rows(Tape& tape, std::span<const Tensor> rows);

}  // namespace dagam::ops

#endif  // DAGAM_OPS_H_
