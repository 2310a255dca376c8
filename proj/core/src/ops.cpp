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

#include "dagam/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dagam/errors.h"

namespace dagam::ops {
namespace {

bool tracks(const Tape& tape, std::initializer_list<const Tensor*> inputs) {
  if (!tape.recording()) return false;
  for (const Tensor* t : inputs) {
    if (t->requires_grad()) return true;
  }
  return false;
}

// Row-major strides of `shape` right-aligned to `rank` dims, with zero
// stride on broadcast (extent 1) dimensions.
std::vector<std::size_t> broadcast_strides(const Shape& shape, const Shape& out) {
  std::vector<std::size_t> strides(out.size(), 0);
  std::size_t stride = 1;
  const std::size_t offset = out.size() - shape.size();
  for (std::size_t d = shape.size(); d-- > 0;) {
    strides[d + offset] = shape[d] == 1 ? 0 : stride;
    stride *= shape[d];
  }
  return strides;
}

// Offset into each operand for every element of the broadcast result.
struct BroadcastMap {
  Shape out;
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
};

BroadcastMap make_broadcast_map(const Shape& sa, const Shape& sb) {
  BroadcastMap map;
  map.out = broadcast_shape(sa, sb);
  const std::size_t n = shape_numel(map.out);
  const auto stride_a = broadcast_strides(sa, map.out);
  const auto stride_b = broadcast_strides(sb, map.out);
  map.a.resize(n);
  map.b.resize(n);
  std::vector<std::size_t> counter(map.out.size(), 0);
  std::size_t off_a = 0, off_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    map.a[i] = off_a;
    map.b[i] = off_b;
    for (std::size_t d = map.out.size(); d-- > 0;) {
      if (++counter[d] < map.out[d]) {
        off_a += stride_a[d];
        off_b += stride_b[d];
        break;
      }
      off_a -= stride_a[d] * (map.out[d] - 1);
      off_b -= stride_b[d] * (map.out[d] - 1);
      counter[d] = 0;
    }
  }
  return map;
}

void require_matrix(const Tensor& x, const char* op) {
  if (x.rank() != 2) {
    throw DimensionError(std::string(op) + " expects a matrix, got " +
                         shape_string(x.shape()));
  }
}

}  // namespace

Shape broadcast_shape(const Shape& a, const Shape& b) {
  const std::size_t rank = std::max(a.size(), b.size());
  Shape out(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    const std::size_t ea = i < a.size() ? a[a.size() - 1 - i] : 1;
    const std::size_t eb = i < b.size() ? b[b.size() - 1 - i] : 1;
    if (ea != eb && ea != 1 && eb != 1) {
      throw DimensionError("shapes " + shape_string(a) + " and " +
                           shape_string(b) + " do not broadcast");
    }
    out[rank - 1 - i] = std::max(ea, eb);
  }
  return out;
}

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.shape()[1] != b.shape()[0]) {
    throw DimensionError("matmul of " + shape_string(a.shape()) + " and " +
                         shape_string(b.shape()));
  }
  const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  std::vector<double> out(m * n, 0.0);
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    double* row = out.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double s = pa[i * k + p];
      const double* brow = pb + p * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += s * brow[j];
    }
  }
  const bool track = tracks(tape, {&a, &b});
  Tensor result({m, n}, std::move(out), track);
  if (track) {
    tape.record({a, b}, result, [a, b, result, m, k, n]() mutable {
      const double* g = result.grad().data();
      const double* pa = a.data().data();
      const double* pb = b.data().data();
      if (a.requires_grad()) {
        double* ga = a.mutable_grad().data();
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t p = 0; p < k; ++p) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += g[i * n + j] * pb[p * n + j];
            ga[i * k + p] += acc;
          }
        }
      }
      if (b.requires_grad()) {
        double* gb = b.mutable_grad().data();
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t p = 0; p < k; ++p) {
            const double s = pa[i * k + p];
            for (std::size_t j = 0; j < n; ++j) gb[p * n + j] += s * g[i * n + j];
          }
        }
      }
    });
  }
  return result;
}

Tensor unary(Tape& tape, UnaryKind kind, const Tensor& x) {
  const auto in = x.data();
  std::vector<double> out(in.size());
  const bool track = tracks(tape, {&x});
  switch (kind) {
    case UnaryKind::kRelu:
      for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = in[i] <= 0.0 ? 0.0 : in[i];  // NaN passes through
        if (track) tape.note_kink(std::abs(in[i]));
      }
      break;
    case UnaryKind::kTanh:
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::tanh(in[i]);
      break;
    case UnaryKind::kExp:
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::exp(in[i]);
      break;
    case UnaryKind::kLog:
      for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = std::log(std::max(in[i], kLogFloor));
      }
      break;
  }
  Tensor result(x.shape(), std::move(out), track);
  if (track) {
    tape.record({x}, result, [x, result, kind]() mutable {
      const auto g = result.grad();
      const auto in = x.data();
      const auto y = result.data();
      auto gx = x.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) {
        double d = 0.0;
        switch (kind) {
          case UnaryKind::kRelu: d = in[i] > 0.0 ? 1.0 : 0.0; break;
          case UnaryKind::kTanh: d = 1.0 - y[i] * y[i]; break;
          case UnaryKind::kExp: d = y[i]; break;
          case UnaryKind::kLog: d = in[i] > kLogFloor ? 1.0 / in[i] : 0.0; break;
        }
        gx[i] += g[i] * d;
      }
    });
  }
  return result;
}

Tensor binary(Tape& tape, BinaryKind kind, const Tensor& a, const Tensor& b) {
  const bool track = tracks(tape, {&a, &b});
  const auto da = a.data();
  const auto db = b.data();
  auto apply = [kind](double u, double v) {
    switch (kind) {
      case BinaryKind::kAdd: return u + v;
      case BinaryKind::kSub: return u - v;
      case BinaryKind::kMul: return u * v;
    }
    return 0.0;
  };
  if (a.shape() == b.shape()) {
    std::vector<double> out(da.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = apply(da[i], db[i]);
    Tensor result(a.shape(), std::move(out), track);
    if (track) {
      tape.record({a, b}, result, [a, b, result, kind]() mutable {
        const auto g = result.grad();
        if (a.requires_grad()) {
          auto ga = a.mutable_grad();
          const auto vb = b.data();
          for (std::size_t i = 0; i < g.size(); ++i) {
            ga[i] += kind == BinaryKind::kMul ? g[i] * vb[i] : g[i];
          }
        }
        if (b.requires_grad()) {
          auto gb = b.mutable_grad();
          const auto va = a.data();
          for (std::size_t i = 0; i < g.size(); ++i) {
            switch (kind) {
              case BinaryKind::kAdd: gb[i] += g[i]; break;
              case BinaryKind::kSub: gb[i] -= g[i]; break;
              case BinaryKind::kMul: gb[i] += g[i] * va[i]; break;
            }
          }
        }
      });
    }
    return result;
  }

  auto map = std::make_shared<BroadcastMap>(make_broadcast_map(a.shape(), b.shape()));
  std::vector<double> out(map->a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = apply(da[map->a[i]], db[map->b[i]]);
  }
  Tensor result(map->out, std::move(out), track);
  if (track) {
    tape.record({a, b}, result, [a, b, result, kind, map]() mutable {
      const auto g = result.grad();
      const auto va = a.data();
      const auto vb = b.data();
      if (a.requires_grad()) {
        auto ga = a.mutable_grad();
        for (std::size_t i = 0; i < g.size(); ++i) {
          ga[map->a[i]] += kind == BinaryKind::kMul ? g[i] * vb[map->b[i]] : g[i];
        }
      }
      if (b.requires_grad()) {
        auto gb = b.mutable_grad();
        for (std::size_t i = 0; i < g.size(); ++i) {
          switch (kind) {
            case BinaryKind::kAdd: gb[map->b[i]] += g[i]; break;
            case BinaryKind::kSub: gb[map->b[i]] -= g[i]; break;
            case BinaryKind::kMul: gb[map->b[i]] += g[i] * va[map->a[i]]; break;
          }
        }
      }
    });
  }
  return result;
}

Tensor clamp(Tape& tape, const Tensor& x, double lo, double hi) {
  if (!(lo <= hi)) throw ContractError("clamp with lo > hi");
  const bool track = tracks(tape, {&x});
  const auto in = x.data();
  std::vector<double> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = std::clamp(in[i], lo, hi);
    if (track) tape.note_kink(std::min(std::abs(in[i] - lo), std::abs(in[i] - hi)));
  }
  Tensor result(x.shape(), std::move(out), track);
  if (track) {
    tape.record({x}, result, [x, result, lo, hi]() mutable {
      const auto g = result.grad();
      const auto in = x.data();
      auto gx = x.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (in[i] > lo && in[i] < hi) gx[i] += g[i];
      }
    });
  }
  return result;
}

Tensor scale(Tape& tape, const Tensor& x, double factor) {
  const bool track = tracks(tape, {&x});
  const auto in = x.data();
  std::vector<double> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] * factor;
  Tensor result(x.shape(), std::move(out), track);
  if (track) {
    tape.record({x}, result, [x, result, factor]() mutable {
      const auto g = result.grad();
      auto gx = x.mutable_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * factor;
    });
  }
  return result;
}

Tensor reduce(Tape& tape, ReduceKind kind, const Tensor& x, std::size_t axis) {
  if (axis >= x.rank()) {
    throw DimensionError("reduction axis " + std::to_string(axis) +
                         " out of range for " + shape_string(x.shape()));
  }
  const Shape& shape = x.shape();
  const std::size_t extent = shape[axis];
  if (extent == 0) throw DegenerateInputError("reduction over an empty axis");
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= shape[d];
  for (std::size_t d = axis + 1; d < shape.size(); ++d) inner *= shape[d];
  Shape out_shape;
  for (std::size_t d = 0; d < shape.size(); ++d) {
    if (d != axis) out_shape.push_back(shape[d]);
  }

  const bool track = tracks(tape, {&x});
  const auto in = x.data();
  std::vector<double> out(outer * inner);
  // argmax per output element, used by the max backward rule
  std::vector<std::size_t> arg;
  if (kind == ReduceKind::kMax) arg.resize(out.size());
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * extent * inner + i;
      if (kind == ReduceKind::kMax) {
        std::size_t best = 0;
        double second = -std::numeric_limits<double>::infinity();
        for (std::size_t e = 1; e < extent; ++e) {
          const double v = in[base + e * inner];
          if (v > in[base + best * inner]) {
            second = in[base + best * inner];
            best = e;
          } else {
            second = std::max(second, v);
          }
        }
        out[o * inner + i] = in[base + best * inner];
        arg[o * inner + i] = best;
        if (track && extent > 1) tape.note_kink(in[base + best * inner] - second);
      } else {
        double acc = 0.0;
        for (std::size_t e = 0; e < extent; ++e) acc += in[base + e * inner];
        out[o * inner + i] =
            kind == ReduceKind::kMean ? acc / static_cast<double>(extent) : acc;
      }
    }
  }
  Tensor result(std::move(out_shape), std::move(out), track);
  if (track) {
    tape.record({x}, result,
                [x, result, kind, outer, inner, extent, arg = std::move(arg)]() mutable {
                  const auto g = result.grad();
                  auto gx = x.mutable_grad();
                  const double w =
                      kind == ReduceKind::kMean ? 1.0 / static_cast<double>(extent) : 1.0;
                  for (std::size_t o = 0; o < outer; ++o) {
                    for (std::size_t i = 0; i < inner; ++i) {
                      const double gi = g[o * inner + i];
                      const std::size_t base = o * extent * inner + i;
                      if (kind == ReduceKind::kMax) {
                        gx[base + arg[o * inner + i] * inner] += gi;
                      } else {
                        for (std::size_t e = 0; e < extent; ++e) gx[base + e * inner] += gi * w;
                      }
                    }
                  }
                });
  }
  return result;
}

Tensor sum_all(Tape& tape, const Tensor& x) {
  const bool track = tracks(tape, {&x});
  double acc = 0.0;
  for (double v : x.data()) acc += v;
  Tensor result = Tensor::scalar(acc, track);
  if (track) {
    tape.record({x}, result, [x, result]() mutable {
      const double g = result.grad()[0];
      for (double& gx : x.mutable_grad()) gx += g;
    });
  }
  return result;
}

Tensor softmax_rows(Tape& tape, const Tensor& x) {
  require_matrix(x, "softmax_rows");
  const std::size_t m = x.rows(), n = x.cols();
  const auto in = x.data();
  std::vector<double> out(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = in.data() + i * n;
    const double peak = *std::max_element(row, row + n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      out[i * n + j] = std::exp(row[j] - peak);
      total += out[i * n + j];
    }
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] /= total;
  }
  const bool track = tracks(tape, {&x});
  Tensor result({m, n}, std::move(out), track);
  if (track) {
    tape.record({x}, result, [x, result, m, n]() mutable {
      const auto g = result.grad();
      const auto y = result.data();
      auto gx = x.mutable_grad();
      for (std::size_t i = 0; i < m; ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) dot += g[i * n + j] * y[i * n + j];
        for (std::size_t j = 0; j < n; ++j) {
          gx[i * n + j] += y[i * n + j] * (g[i * n + j] - dot);
        }
      }
    });
  }
  return result;
}

Tensor gather_rows(Tape& tape, const Tensor& x, std::span<const std::size_t> index) {
  require_matrix(x, "gather_rows");
  if (index.empty()) throw DegenerateInputError("gather_rows with no rows");
  const std::size_t n = x.cols();
  const auto in = x.data();
  std::vector<double> out;
  out.reserve(index.size() * n);
  for (std::size_t r : index) {
    if (r >= x.rows()) {
      throw DimensionError("row " + std::to_string(r) + " out of range for " +
                           shape_string(x.shape()));
    }
    out.insert(out.end(), in.begin() + r * n, in.begin() + (r + 1) * n);
  }
  const bool track = tracks(tape, {&x});
  Tensor result({index.size(), n}, std::move(out), track);
  if (track) {
    std::vector<std::size_t> rows(index.begin(), index.end());
    tape.record({x}, result, [x, result, n, rows = std::move(rows)]() mutable {
      const auto g = result.grad();
      auto gx = x.mutable_grad();
      for (std::size_t k = 0; k < rows.size(); ++k) {
        for (std::size_t j = 0; j < n; ++j) gx[rows[k] * n + j] += g[k * n + j];
      }
    });
  }
  return result;
}

Tensor concat(Tape& tape, std::span<const Tensor> parts) {
  if (parts.empty()) throw DegenerateInputError("concat of nothing");
  std::vector<double> out;
  bool any = false;
  for (const Tensor& p : parts) {
    if (p.rank() != 1) {
      throw DimensionError("concat expects vectors, got " + shape_string(p.shape()));
    }
    out.insert(out.end(), p.data().begin(), p.data().end());
    any = any || p.requires_grad();
  }
  const bool track = tape.recording() && any;
  Tensor result = Tensor::vector(std::move(out), track);
  if (track) {
    std::vector<Tensor> inputs(parts.begin(), parts.end());
    tape.record(inputs, result, [inputs, result]() mutable {
      const auto g = result.grad();
      std::size_t offset = 0;
      for (Tensor& p : inputs) {
        if (p.requires_grad()) p.accumulate_grad(g.subspan(offset, p.numel()));
        offset += p.numel();
      }
    });
  }
  return result;
}

Tensor stack_rows(Tape& tape, std::span<const Tensor> rows) {
  if (rows.empty()) throw DegenerateInputError("stack_rows of nothing");
  const std::size_t n = rows.front().numel();
  std::vector<double> out;
  out.reserve(rows.size() * n);
  bool any = false;
  for (const Tensor& r : rows) {
    if (r.rank() != 1 || r.numel() != n) {
      throw DimensionError("stack_rows expects vectors of length " +
                           std::to_string(n) + ", got " + shape_string(r.shape()));
    }
    out.insert(out.end(), r.data().begin(), r.data().end());
    any = any || r.requires_grad();
  }
  const bool track = tape.recording() && any;
  Tensor result({rows.size(), n}, std::move(out), track);
  if (track) {
    std::vector<Tensor> inputs(rows.begin(), rows.end());
    tape.record(inputs, result, [inputs, result, n]() mutable {
      const auto g = result.grad();
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i].requires_grad()) inputs[i].accumulate_grad(g.subspan(i * n, n));
      }
    });
  }
  return result;
}

}  // namespace dagam::ops
