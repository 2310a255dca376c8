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

#include "dagam/tensor.h"

#include <algorithm>
#include <optional>
#include <sstream>

#include "dagam/errors.h"

namespace dagam {

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t extent : shape) n *= extent;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

struct Tensor::Node {
  Shape shape;
  std::vector<double> data;
  bool requires_grad = false;
  std::optional<std::vector<double>> grad;
};

Tensor::Tensor() : node_(std::make_shared<Node>()) { node_->data = {0.0}; }

Tensor::Tensor(Shape shape, std::vector<double> data, bool requires_grad)
    : node_(std::make_shared<Node>()) {
  for (std::size_t extent : shape) {
    if (extent == 0) {
      throw DimensionError("tensor extents must be positive, got " +
                           shape_string(shape));
    }
  }
  if (shape_numel(shape) != data.size()) {
    throw DimensionError("shape " + shape_string(shape) + " needs " +
                         std::to_string(shape_numel(shape)) + " values, got " +
                         std::to_string(data.size()));
  }
  node_->shape = std::move(shape);
  node_->data = std::move(data);
  node_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  std::vector<double> data(shape_numel(shape), 0.0);
  return Tensor(std::move(shape), std::move(data), requires_grad);
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return Tensor({}, {value}, requires_grad);
}

Tensor Tensor::vector(std::vector<double> values, bool requires_grad) {
  Shape shape{values.size()};
  return Tensor(std::move(shape), std::move(values), requires_grad);
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows,
                      bool requires_grad) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<double> values;
  values.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged matrix literal");
    values.insert(values.end(), row.begin(), row.end());
  }
  return Tensor({r, c}, std::move(values), requires_grad);
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols,
                      std::vector<double> values, bool requires_grad) {
  return Tensor({rows, cols}, std::move(values), requires_grad);
}

const Shape& Tensor::shape() const { return node_->shape; }
std::size_t Tensor::numel() const { return node_->data.size(); }

std::size_t Tensor::rows() const {
  if (rank() != 2) throw DimensionError("rows() on " + shape_string(shape()));
  return node_->shape[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw DimensionError("cols() on " + shape_string(shape()));
  return node_->shape[1];
}

std::span<const double> Tensor::data() const { return node_->data; }
std::span<double> Tensor::mutable_data() { return node_->data; }

double Tensor::item() const {
  if (numel() != 1) {
    throw ContractError("item() on non-scalar tensor " + shape_string(shape()));
  }
  return node_->data[0];
}

double Tensor::at(std::size_t i) const { return node_->data.at(i); }

double Tensor::at(std::size_t row, std::size_t col) const {
  return node_->data.at(row * cols() + col);
}

bool Tensor::requires_grad() const { return node_->requires_grad; }
void Tensor::set_requires_grad(bool value) { node_->requires_grad = value; }

bool Tensor::has_grad() const { return node_->grad.has_value(); }

std::span<const double> Tensor::grad() const {
  if (!node_->grad) return {};
  return *node_->grad;
}

std::span<double> Tensor::mutable_grad() const {
  if (!node_->grad) node_->grad.emplace(node_->data.size(), 0.0);
  return *node_->grad;
}

void Tensor::accumulate_grad(std::span<const double> delta) const {
  auto g = mutable_grad();
  if (delta.size() != g.size()) {
    throw DimensionError("gradient of size " + std::to_string(delta.size()) +
                         " for tensor " + shape_string(shape()));
  }
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += delta[i];
}

void Tensor::zero_grad() const { node_->grad.reset(); }

Tensor Tensor::clone() const {
  return Tensor(node_->shape, node_->data, node_->requires_grad);
}

void Tape::record(std::vector<Tensor> inputs, Tensor output, BackwardFn fn) {
  entries_.push_back({std::move(inputs), std::move(output), std::move(fn)});
}

void Tape::backward(const Tensor& loss) {
  if (loss.numel() != 1) {
    throw ContractError("backward() needs a scalar loss, got shape " +
                        shape_string(loss.shape()));
  }
  // Intermediate buffers restart from zero so a second backward() adds
  // exactly one more gradient into the leaves. Every reachable requires_grad
  // tensor ends up with a buffer, even when no gradient flows into it.
  for (auto& entry : entries_) {
    entry.output.zero_grad();
    entry.output.mutable_grad();
  }
  for (auto& entry : entries_) {
    for (auto& input : entry.inputs) {
      if (input.requires_grad()) input.mutable_grad();
    }
  }
  Tensor root = loss;
  root.mutable_grad()[0] += 1.0;
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) it->fn();
}

void Tape::clear() {
  entries_.clear();
  min_kink_ = std::numeric_limits<double>::infinity();
  kink_seen_ = false;
}

void Tape::note_kink(double distance) {
  kink_seen_ = true;
  min_kink_ = std::min(min_kink_, distance);
}

}  // namespace dagam
