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

#ifndef DAGAM_CHECKPOINT_H_
#define DAGAM_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dagam/config.h"
#include "dagam/model.h"

namespace dagam {

// Binary layout, all integers and floats little-endian:
//
//   "DAGAMCKP"                      8-byte magic
//   u32 version                     kCheckpointVersion
//   u64 n, n bytes                  resolved config as JSON
//   u32 block count
//   per block: u32 name length, name bytes, u32 rank, rank x u64 extents,
//              product(extents) x f64 row-major values
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct ParamBlock {
  std::string name;
  Shape shape;
  std::vector<double> values;
};

struct Checkpoint {
  std::uint32_t version = kCheckpointVersion;
  Json config;
  std::vector<ParamBlock> blocks;
};

std::string encode_checkpoint(const ModelParams& params, const Json& config);
Checkpoint decode_checkpoint(const std::string& bytes);

void write_checkpoint(const ModelParams& params, const Json& config,
                      const std::filesystem::path& path);
Checkpoint read_checkpoint(const std::filesystem::path& path);

// Copies block values into freshly initialised parameters of `model`.
// Throws LoadError on missing, extra or mis-shaped blocks.
ModelParams params_from_checkpoint(const Checkpoint& checkpoint, const ModelConfig& model);

}  // namespace dagam

#endif  // DAGAM_CHECKPOINT_H_
