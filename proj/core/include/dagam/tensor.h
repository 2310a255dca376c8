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

#ifndef DAGAM_TENSOR_H_
#define DAGAM_TENSOR_H_

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dagam {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_string(const Shape& shape);

// Dense row-major tensor of doubles. A Tensor is a shared handle: copies
// refer to the same storage and gradient slot, which is what lets a tape
// write gradients back into model parameters. Use clone() for a deep copy.
class Tensor {
 public:
  // An empty rank-0 tensor holding 0.
  Tensor();
  Tensor(Shape shape, std::vector<double> data, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  static Tensor vector(std::vector<double> values, bool requires_grad = false);
  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows,
                       bool requires_grad = false);
  static Tensor matrix(std::size_t rows, std::size_t cols,
                       std::vector<double> values, bool requires_grad = false);

  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t numel() const;
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const double> data() const;
  std::span<double> mutable_data();
  double item() const;
  double at(std::size_t i) const;
  double at(std::size_t row, std::size_t col) const;

  bool requires_grad() const;
  void set_requires_grad(bool value);

  bool has_grad() const;
  std::span<const double> grad() const;
  // Allocates a zero buffer when absent.
  std::span<double> mutable_grad() const;
  void accumulate_grad(std::span<const double> delta) const;
  // Drops the gradient buffer.
  void zero_grad() const;

  Tensor clone() const;
  bool is_same(const Tensor& other) const { return node_ == other.node_; }

 private:
  struct Node;
  std::shared_ptr<Node> node_;
};

// Ordered record of differentiable operations. Operations append themselves
// as they run, so records are in topological order by construction; backward
// replays them in exact reverse record order.
//
// A tape is single-writer. Repeated backward() calls accumulate into the
// existing gradient buffers; call zero_grad() on parameters between steps.
class Tape {
 public:
  using BackwardFn = std::function<void()>;

  explicit Tape(bool recording = true) : recording_(recording) {}

  bool recording() const { return recording_; }

  void record(std::vector<Tensor> inputs, Tensor output, BackwardFn fn);
  void backward(const Tensor& loss);

  std::size_t size() const { return entries_.size(); }
  void clear();

  // Non-smooth operations (relu, max, clamp) report how far their input sat
  // from a kink. Gradient checks use this to reject non-smooth points.
  void note_kink(double distance);
  bool kink_seen() const { return kink_seen_; }
  // Infinity when no kink was noted.
  double min_kink_distance() const { return min_kink_; }

 private:
  struct Entry {
    std::vector<Tensor> inputs;
    Tensor output;
    BackwardFn fn;
  };
  bool recording_;
  std::vector<Entry> entries_;
  double min_kink_ = std::numeric_limits<double>::infinity();
  bool kink_seen_ = false;
};

}  // namespace dagam

#endif  // DAGAM_TENSOR_H_
