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

// Binary parameter checkpoints.
//
// Layout (all integers little-endian):
//   8 bytes   magic "EFPCKPT\0"
//   u32       format version (1)
//   u32       tensor count
//   per tensor:
//     u32 name length, name bytes
//     u32 rank, u64 dims[rank]
//     u64 offset of the first value, counted in doubles from the data start
//   u64       total value count
//   f64[...]  values (IEEE-754 binary64, little-endian)
//
// The manifest precedes the data so that shapes can be compared with a
// freshly built model before any value is copied.

#ifndef EFP_CHECKPOINT_H_
#define EFP_CHECKPOINT_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "efp/model.h"

namespace efp {

inline constexpr char kCheckpointMagic[8] = {'E', 'F', 'P', 'C', 'K', 'P', 'T', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointTensor {
  std::string name;
  Shape shape;
  std::vector<double> values;
};

struct Checkpoint {
  std::vector<CheckpointTensor> tensors;
};

Checkpoint make_checkpoint(const Model& model);
void write_checkpoint(std::ostream& os, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& is);

void save_checkpoint(const std::string& path, const Model& model);
Checkpoint load_checkpoint(const std::string& path);

// Copies values into `model`. Throws DimensionError naming the first tensor
// whose name or shape disagrees.
void apply_checkpoint(const Checkpoint& ckpt, Model& model);

}  // namespace efp

#endif  // EFP_CHECKPOINT_H_
