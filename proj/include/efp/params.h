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

#ifndef EFP_PARAMS_H_
#define EFP_PARAMS_H_

#include <cmath>
#include <string>
#include <vector>

#include "efp/rng.h"
#include "efp/tensor.h"

namespace efp {

struct NamedParam {
  std::string name;
  Tensor tensor;
};

using ParamList = std::vector<NamedParam>;

// Zero-initialized trainable tensor.
inline Tensor make_param(Shape shape) { return Tensor(std::move(shape), true); }

inline void fill_uniform(Tensor& t, double bound, Rng& rng) {
  for (auto& v : t.mutable_values()) v = rng.uniform(-bound, bound);
}

// uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) where fan_in is the last axis.
inline void init_fan_in(Tensor& w, Rng& rng) {
  fill_uniform(w, 1.0 / std::sqrt(static_cast<double>(w.shape().back())), rng);
}

inline std::size_t count_scalars(const ParamList& params) {
  std::size_t n = 0;
  for (const auto& p : params) n += p.tensor.numel();
  return n;
}

}  // namespace efp

#endif  // EFP_PARAMS_H_
