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

#include "dagam/graph.h"

#include <cmath>
#include <set>
#include <sstream>

#include "dagam/errors.h"
#include "dagam/files.h"

namespace dagam {

ElectrodeLayout::ElectrodeLayout(std::vector<Electrode> channels)
    : channels_(std::move(channels)) {
  std::set<std::string> seen;
  for (const Electrode& e : channels_) {
    if (e.name.empty()) throw LayoutError("electrode with empty name");
    if (!seen.insert(e.name).second) throw LayoutError("duplicate channel name " + e.name);
    if (!std::isfinite(e.x) || !std::isfinite(e.y) || !std::isfinite(e.z)) {
      throw LayoutError("non-finite coordinate for channel " + e.name);
    }
  }
}

std::vector<std::string> ElectrodeLayout::names() const {
  std::vector<std::string> out;
  out.reserve(channels_.size());
  for (const Electrode& e : channels_) out.push_back(e.name);
  return out;
}

std::size_t ElectrodeLayout::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    if (channels_[i].name == name) return i;
  }
  throw LayoutError("unknown channel " + name);
}

ElectrodeLayout ElectrodeLayout::prefix(std::size_t n) const {
  if (n > channels_.size()) {
    throw ConfigError("requested " + std::to_string(n) + " channels but layout has " +
                      std::to_string(channels_.size()));
  }
  return ElectrodeLayout(std::vector<Electrode>(channels_.begin(), channels_.begin() + n));
}

ElectrodeLayout ElectrodeLayout::permuted(std::span<const std::size_t> order) const {
  if (order.size() != channels_.size()) throw DimensionError("permutation size mismatch");
  std::vector<Electrode> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(channels_.at(i));
  return ElectrodeLayout(std::move(out));
}

ElectrodeLayout read_layout_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "name,x,y,z") {
    throw LoadError(path.string() + ":1: expected header 'name,x,y,z'");
  }
  std::vector<Electrode> channels;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto fields = split_fields(lines[n]);
    if (fields.size() != 4) {
      throw LoadError(path.string() + ":" + std::to_string(n + 1) + ": expected 4 columns, got " +
                      std::to_string(fields.size()));
    }
    channels.push_back({std::string(fields[0]), parse_double(fields[1], path, n + 1),
                        parse_double(fields[2], path, n + 1),
                        parse_double(fields[3], path, n + 1)});
  }
  try {
    return ElectrodeLayout(std::move(channels));
  } catch (const LayoutError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

void write_layout_csv(const ElectrodeLayout& layout, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "name,x,y,z\n";
  for (const Electrode& e : layout.channels()) {
    out << e.name << ',' << format_double(e.x) << ',' << format_double(e.y) << ','
        << format_double(e.z) << '\n';
  }
  write_file_atomic(path, out.str());
}

Adjacency build_adjacency(const ElectrodeLayout& layout, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  const std::size_t n = layout.size();
  Adjacency adj{Matrix(n, n), {}};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = layout[i].x - layout[j].x;
      const double dy = layout[i].y - layout[j].y;
      const double dz = layout[i].z - layout[j].z;
      const double d2 = dx * dx + dy * dy + dz * dz;
      if (!(d2 > 0.0)) {
        throw LayoutError("electrodes " + layout[i].name + " and " + layout[j].name +
                          " coincide");
      }
      const double w = std::min(1.0, sigma / d2);
      adj.matrix(i, j) = w;
      adj.matrix(j, i) = w;
    }
  }
  return adj;
}

Adjacency apply_global_connections(Adjacency adjacency, const ElectrodeLayout& layout,
                                   std::span<const ChannelPair> pairs, double weight) {
  if (!(weight >= -1.0 && weight <= 0.0)) {
    throw ConfigError("global connection weight must lie in [-1, 0]");
  }
  if (layout.size() != adjacency.size()) {
    throw DimensionError("layout has " + std::to_string(layout.size()) +
                         " channels, adjacency has " + std::to_string(adjacency.size()));
  }
  for (const auto& [a, b] : pairs) {
    const std::size_t i = layout.index_of(a);
    const std::size_t j = layout.index_of(b);
    if (i == j) throw LayoutError("global pair joins " + a + " to itself");
    adjacency.matrix(i, j) = weight;
    adjacency.matrix(j, i) = weight;
    adjacency.global_pairs.push_back({i, j, weight});
  }
  return adjacency;
}

Matrix renormalized_laplacian(const Matrix& adjacency) {
  if (adjacency.rows != adjacency.cols) {
    throw DimensionError("adjacency must be square");
  }
  const std::size_t n = adjacency.rows;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (adjacency(i, j) != adjacency(j, i)) throw GraphError("adjacency is not symmetric");
    }
  }
  Matrix a_tilde = adjacency;
  for (std::size_t i = 0; i < n; ++i) a_tilde(i, i) += 1.0;
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) degree += std::abs(a_tilde(i, j));
    if (!(degree > 0.0)) throw GraphError("zero degree at node " + std::to_string(i));
    inv_sqrt[i] = 1.0 / std::sqrt(degree);
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a_tilde(i, j) * (inv_sqrt[i] * inv_sqrt[j]);
  }
  return out;
}

}  // namespace dagam
