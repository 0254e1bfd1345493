// Copyright 2026 The efpgraph Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "efp/checkpoint.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "efp/errors.h"

namespace efp {
namespace {

// Sanity bounds so a corrupt header cannot trigger huge allocations.
constexpr std::uint32_t kMaxTensors = 1u << 16;
constexpr std::uint32_t kMaxNameLength = 1u << 12;
constexpr std::uint32_t kMaxRank = 8;

template <typename T>
void put_le(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<unsigned char>(v >> (8 * i));
  }
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) {
    throw FormatError("checkpoint truncated");
  }
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

Checkpoint make_checkpoint(const Model& model) {
  Checkpoint ckpt;
  for (const auto& p : model.parameters()) {
    const auto v = p.tensor.values();
    ckpt.tensors.push_back({p.name, p.tensor.shape(), {v.begin(), v.end()}});
  }
  return ckpt;
}

void write_checkpoint(std::ostream& os, const Checkpoint& ckpt) {
  os.write(kCheckpointMagic, sizeof kCheckpointMagic);
  put_le<std::uint32_t>(os, kCheckpointVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(ckpt.tensors.size()));
  std::uint64_t offset = 0;
  for (const auto& t : ckpt.tensors) {
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(t.name.size()));
    os.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(t.shape.size()));
    for (auto d : t.shape) put_le<std::uint64_t>(os, d);
    put_le<std::uint64_t>(os, offset);
    offset += t.values.size();
  }
  put_le<std::uint64_t>(os, offset);
  for (const auto& t : ckpt.tensors) {
    for (double v : t.values) put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(v));
  }
  if (!os) throw Error("failed to write checkpoint");
}

Checkpoint read_checkpoint(std::istream& is) {
  char magic[sizeof kCheckpointMagic];
  if (!is.read(magic, sizeof magic) ||
      std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) {
    throw FormatError("not a checkpoint (bad magic)");
  }
  const auto version = get_le<std::uint32_t>(is);
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto count = get_le<std::uint32_t>(is);
  if (count > kMaxTensors) throw FormatError("checkpoint tensor count too large");

  Checkpoint ckpt;
  std::vector<std::uint64_t> offsets;
  std::uint64_t expected_offset = 0;
  for (std::uint32_t k = 0; k < count; ++k) {
    CheckpointTensor t;
    const auto len = get_le<std::uint32_t>(is);
    if (len > kMaxNameLength) throw FormatError("checkpoint name too long");
    t.name.resize(len);
    if (!is.read(t.name.data(), len)) throw FormatError("checkpoint truncated");
    const auto rank = get_le<std::uint32_t>(is);
    if (rank == 0 || rank > kMaxRank) {
      throw FormatError("checkpoint tensor '" + t.name + "' has bad rank");
    }
    for (std::uint32_t r = 0; r < rank; ++r) {
      const auto d = get_le<std::uint64_t>(is);
      if (d == 0 || d > (1ull << 32)) {
        throw FormatError("checkpoint tensor '" + t.name + "' has bad dims");
      }
      t.shape.push_back(static_cast<std::size_t>(d));
    }
    const auto offset = get_le<std::uint64_t>(is);
    if (offset != expected_offset) {
      throw FormatError("checkpoint tensor '" + t.name + "' has bad offset");
    }
    expected_offset += shape_numel(t.shape);
    ckpt.tensors.push_back(std::move(t));
  }
  const auto total = get_le<std::uint64_t>(is);
  if (total != expected_offset) throw FormatError("checkpoint value count mismatch");
  for (auto& t : ckpt.tensors) {
    t.values.resize(shape_numel(t.shape));
    for (auto& v : t.values) v = std::bit_cast<double>(get_le<std::uint64_t>(is));
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes after checkpoint data");
  }
  return ckpt;
}

void save_checkpoint(const std::string& path, const Model& model) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_checkpoint(os, make_checkpoint(model));
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("file not found: '" + path + "'");
  return read_checkpoint(is);
}

void apply_checkpoint(const Checkpoint& ckpt, Model& model) {
  auto params = model.parameters();
  const std::size_t common = std::min(params.size(), ckpt.tensors.size());
  for (std::size_t i = 0; i < common; ++i) {
    const auto& src = ckpt.tensors[i];
    const auto& dst = params[i];
    if (src.name != dst.name) {
      throw DimensionError("checkpoint tensor #" + std::to_string(i) + " is '" +
                           src.name + "' but the model expects '" + dst.name +
                           "'");
    }
    if (src.shape != dst.tensor.shape()) {
      throw DimensionError("checkpoint tensor '" + src.name + "' has shape " +
                           shape_to_string(src.shape) +
                           " but the model expects " +
                           shape_to_string(dst.tensor.shape()));
    }
  }
  if (params.size() != ckpt.tensors.size()) {
    throw DimensionError("checkpoint has " + std::to_string(ckpt.tensors.size()) +
                         " tensors but the model has " +
                         std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor t = params[i].tensor;
    std::copy(ckpt.tensors[i].values.begin(), ckpt.tensors[i].values.end(),
              t.mutable_values().begin());
  }
}

}  // namespace efp
