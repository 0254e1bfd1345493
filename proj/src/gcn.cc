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

#include "efp/gcn.h"

#include <cmath>

#include "efp/errors.h"

namespace efp {

GcnParams::GcnParams(std::size_t input_dim, std::size_t features,
                     std::size_t num_layers, Activation act)
    : activation(act) {
  if (num_layers == 0) throw ConfigError("GCN needs at least one layer");
  for (std::size_t l = 0; l < num_layers; ++l) {
    const std::size_t in = l == 0 ? input_dim : features;
    layers.push_back({make_param({in, features}), make_param({features})});
  }
}

void GcnParams::initialize(Rng& rng) {
  for (auto& layer : layers) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.weight.dim(0)));
    fill_uniform(layer.weight, bound, rng);
  }
}

void GcnParams::append(const std::string& prefix, ParamList& out) const {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    out.push_back({prefix + ".W" + std::to_string(l), layers[l].weight});
    out.push_back({prefix + ".b" + std::to_string(l), layers[l].bias});
  }
}

Tensor gcn_layer(const Tensor& adjacency, const Tensor& hidden,
                 const Tensor& weight, const Tensor& bias, Activation act) {
  if (adjacency.rank() != 2 || adjacency.dim(0) != adjacency.dim(1) ||
      hidden.rank() != 2 || adjacency.dim(1) != hidden.dim(0)) {
    throw DimensionError("gcn_layer: adjacency " +
                         shape_to_string(adjacency.shape()) +
                         " does not match hidden " +
                         shape_to_string(hidden.shape()));
  }
  return activate(add_bias(matmul(matmul(adjacency, hidden), weight), bias), act);
}

Tensor gcn_stack(const Tensor& adjacency, const Tensor& hidden,
                 const GcnParams& p) {
  Tensor h = hidden;
  for (const auto& layer : p.layers) {
    h = gcn_layer(adjacency, h, layer.weight, layer.bias, p.activation);
  }
  return h;
}

}  // namespace efp
