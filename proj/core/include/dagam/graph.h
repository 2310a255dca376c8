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

#ifndef DAGAM_GRAPH_H_
#define DAGAM_GRAPH_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dagam/matrix.h"

namespace dagam {

struct Electrode {
  std::string name;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Ordered channel list. Channel order defines node index order everywhere
// downstream. Names are unique and coordinates finite.
class ElectrodeLayout {
 public:
  ElectrodeLayout() = default;
  explicit ElectrodeLayout(std::vector<Electrode> channels);

  std::size_t size() const { return channels_.size(); }
  const std::vector<Electrode>& channels() const { return channels_; }
  const Electrode& operator[](std::size_t i) const { return channels_[i]; }
  std::vector<std::string> names() const;

  // Throws LayoutError for unknown names.
  std::size_t index_of(const std::string& name) const;

  // First `n` channels, in order. Throws ConfigError when n exceeds size().
  ElectrodeLayout prefix(std::size_t n) const;

  // Reorders channels: result[i] = (*this)[order[i]].
  ElectrodeLayout permuted(std::span<const std::size_t> order) const;

 private:
  std::vector<Electrode> channels_;
};

// The 62-channel extended 10-20 montage used by SEED-style recordings, on a
// unit-sphere head model (x right, y front, z up).
ElectrodeLayout standard_62_layout();

using ChannelPair = std::pair<std::string, std::string>;

// Symmetric left/right frontal and temporal pairs of the 62-channel montage.
std::vector<ChannelPair> default_global_pairs();

// CSV with header `name,x,y,z`.
ElectrodeLayout read_layout_csv(const std::filesystem::path& path);
void write_layout_csv(const ElectrodeLayout& layout, const std::filesystem::path& path);

struct GlobalConnection {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 0.0;
};

struct Adjacency {
  Matrix matrix;
  std::vector<GlobalConnection> global_pairs;

  std::size_t size() const { return matrix.rows; }
};

// Default calibration constant for distance weights on the unit-sphere
// montage; puts the median off-diagonal weight of standard_62_layout() near 0.3.
inline constexpr double kDefaultSigma = 0.37;

// A_ij = min(1, sigma / d_ij^2) off the diagonal, zero on it.
// Throws LayoutError naming the pair when two electrodes coincide and
// ConfigError when sigma <= 0.
Adjacency build_adjacency(const ElectrodeLayout& layout, double sigma);

// Overwrites both symmetric entries of every listed pair with `weight`,
// which must lie in [-1, 0].
Adjacency apply_global_connections(Adjacency adjacency, const ElectrodeLayout& layout,
                                   std::span<const ChannelPair> pairs, double weight);

// D^-1/2 (A + I) D^-1/2 with D_ii = sum_j |(A + I)_ij|. Absolute degrees keep
// negative global connections from producing non-positive degrees.
// Throws GraphError on a zero-degree row.
Matrix renormalized_laplacian(const Matrix& adjacency);
inline Matrix renormalized_laplacian(const Adjacency& adjacency) {
  return renormalized_laplacian(adjacency.matrix);
}

}  // namespace dagam

#endif  // DAGAM_GRAPH_H_
