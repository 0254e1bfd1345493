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

#ifndef EFP_GCN_H_
#define EFP_GCN_H_

#include <cstddef>
#include <string>
#include <vector>

#include "efp/params.h"
#include "efp/rng.h"
#include "efp/tensor.h"

namespace efp {

struct GcnLayerParams {
  Tensor weight;  // [d_in x d_out]
  Tensor bias;    // [d_out]
};

struct GcnParams {
  std::vector<GcnLayerParams> layers;
  Activation activation = Activation::kRelu;

  GcnParams() = default;
  // First layer maps input_dim -> features, the rest features -> features.
  GcnParams(std::size_t input_dim, std::size_t features, std::size_t num_layers = 2,
            Activation act = Activation::kRelu);

  std::size_t output_dim() const { return layers.back().weight.dim(1); }
  void initialize(Rng& rng);
  void append(const std::string& prefix, ParamList& out) const;
};

// g(A * H * W + bias)
Tensor gcn_layer(const Tensor& adjacency, const Tensor& hidden,
                 const Tensor& weight, const Tensor& bias,
                 Activation act = Activation::kRelu);

// Applies every layer in order with the same adjacency.
Tensor gcn_stack(const Tensor& adjacency, const Tensor& hidden,
                 const GcnParams& p);

}  // namespace efp

#endif  // EFP_GCN_H_
