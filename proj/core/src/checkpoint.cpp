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

#include "dagam/checkpoint.h"

#include <bit>
#include <cstring>

#include "dagam/errors.h"
#include "dagam/files.h"

namespace dagam {
namespace {

constexpr char kMagic[8] = {'D', 'A', 'G', 'A', 'M', 'C', 'K', 'P'};

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
  }
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename T>
  T get_le() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  std::string get_bytes(std::size_t n) {
    need(n);
    std::string out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw LoadError("checkpoint truncated at byte " + std::to_string(pos_));
  }
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(const ModelParams& params, const Json& config) {
  std::string out(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(out, kCheckpointVersion);
  const std::string cfg = config.dump();
  put_le<std::uint64_t>(out, cfg.size());
  out += cfg;
  const auto named = params.named();
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(named.size()));
  for (const NamedParam& p : named) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.name.size()));
    out += p.name;
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.value.rank()));
    for (std::size_t extent : p.value.shape()) put_le<std::uint64_t>(out, extent);
    for (double v : p.value.data()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  return out;
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  Reader in(bytes);
  if (in.get_bytes(sizeof kMagic) != std::string(kMagic, sizeof kMagic)) {
    throw LoadError("not a dagam checkpoint");
  }
  Checkpoint ckpt;
  ckpt.version = in.get_le<std::uint32_t>();
  if (ckpt.version != kCheckpointVersion) {
    throw LoadError("unsupported checkpoint version " + std::to_string(ckpt.version));
  }
  const auto cfg_len = in.get_le<std::uint64_t>();
  try {
    ckpt.config = Json::parse(in.get_bytes(cfg_len));
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError(std::string("checkpoint config: ") + e.what());
  }
  const auto blocks = in.get_le<std::uint32_t>();
  for (std::uint32_t b = 0; b < blocks; ++b) {
    ParamBlock block;
    block.name = in.get_bytes(in.get_le<std::uint32_t>());
    const auto rank = in.get_le<std::uint32_t>();
    for (std::uint32_t d = 0; d < rank; ++d) block.shape.push_back(in.get_le<std::uint64_t>());
    const std::size_t count = shape_numel(block.shape);
    block.values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      block.values.push_back(std::bit_cast<double>(in.get_le<std::uint64_t>()));
    }
    ckpt.blocks.push_back(std::move(block));
  }
  if (!in.done()) throw LoadError("trailing bytes after checkpoint blocks");
  return ckpt;
}

void write_checkpoint(const ModelParams& params, const Json& config,
                      const std::filesystem::path& path) {
  write_file_atomic(path, encode_checkpoint(params, config));
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  try {
    return decode_checkpoint(read_file(path));
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

ModelParams params_from_checkpoint(const Checkpoint& checkpoint, const ModelConfig& model) {
  ModelParams params = ModelParams::initialize(model, 0);
  auto named = params.named();
  if (named.size() != checkpoint.blocks.size()) {
    throw LoadError("checkpoint has " + std::to_string(checkpoint.blocks.size()) +
                    " blocks, model expects " + std::to_string(named.size()));
  }
  for (NamedParam& p : named) {
    const ParamBlock* found = nullptr;
    for (const ParamBlock& b : checkpoint.blocks) {
      if (b.name == p.name) found = &b;
    }
    if (!found) throw LoadError("checkpoint lacks block " + p.name);
    if (found->shape != p.value.shape()) {
      throw LoadError("block " + p.name + " has shape " + shape_string(found->shape) +
                      ", model expects " + shape_string(p.value.shape()));
    }
    auto dst = p.value.mutable_data();
    std::copy(found->values.begin(), found->values.end(), dst.begin());
  }
  return params;
}

}  // namespace dagam
