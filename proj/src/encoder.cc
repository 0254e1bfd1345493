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

#include "efp/encoder.h"

#include "efp/errors.h"

namespace efp {
namespace {

constexpr const char* kGateNames[4] = {"i", "f", "o", "g"};

// Gate update given precomputed input projections (W x + b) for one step.
LstmState step(const std::array<Tensor, 4>& projected, const LstmState& prev,
               const LstmDirectionParams& p) {
  std::array<Tensor, 4> pre;
  for (int g = 0; g < 4; ++g) {
    pre[g] = add(projected[g], matmul_nt(prev.h, p.w_hidden[g]));
  }
  const Tensor i = sigmoid(pre[kInputGate]);
  const Tensor f = sigmoid(pre[kForgetGate]);
  const Tensor o = sigmoid(pre[kOutputGate]);
  const Tensor cand = tanh(pre[kCandidate]);
  Tensor c = add(mul(f, prev.c), mul(i, cand));
  Tensor h = mul(o, tanh(c));
  return {std::move(h), std::move(c)};
}

std::vector<Tensor> run_direction(const Tensor& inputs,
                                  const LstmDirectionParams& p, bool reverse) {
  const std::size_t n = inputs.dim(0);
  std::array<Tensor, 4> projected_all;
  for (int g = 0; g < 4; ++g) {
    projected_all[g] = add_bias(matmul_nt(inputs, p.w_input[g]), p.bias[g]);
  }
  std::vector<Tensor> outputs(n);
  LstmState state = zero_state(p.hidden());
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t t = reverse ? n - 1 - s : s;
    std::array<Tensor, 4> projected;
    for (int g = 0; g < 4; ++g) projected[g] = row(projected_all[g], t);
    state = step(projected, state, p);
    outputs[t] = state.h;
  }
  return outputs;
}

}  // namespace

LstmDirectionParams::LstmDirectionParams(std::size_t input_size,
                                         std::size_t hidden) {
  if (input_size == 0 || hidden == 0) {
    throw ConfigError("LSTM sizes must be positive");
  }
  for (int g = 0; g < 4; ++g) {
    w_input[g] = make_param({hidden, input_size});
    w_hidden[g] = make_param({hidden, hidden});
    bias[g] = make_param({hidden});
  }
}

void LstmDirectionParams::append(const std::string& prefix, ParamList& out) const {
  for (int g = 0; g < 4; ++g) {
    out.push_back({prefix + ".W_" + kGateNames[g], w_input[g]});
    out.push_back({prefix + ".U_" + kGateNames[g], w_hidden[g]});
    out.push_back({prefix + ".b_" + kGateNames[g], bias[g]});
  }
}

EncoderParams::EncoderParams(std::size_t input_dim, std::size_t hidden,
                             std::size_t num_layers) {
  if (num_layers == 0) throw ConfigError("encoder needs at least one layer");
  for (std::size_t l = 0; l < num_layers; ++l) {
    const std::size_t in = l == 0 ? input_dim : 2 * hidden;
    layers.push_back({LstmDirectionParams(in, hidden),
                      LstmDirectionParams(in, hidden)});
  }
}

void EncoderParams::initialize(Rng& rng) {
  for (auto& layer : layers) {
    for (auto* dir : {&layer.forward, &layer.backward}) {
      for (int g = 0; g < 4; ++g) {
        init_fan_in(dir->w_input[g], rng);
        init_fan_in(dir->w_hidden[g], rng);
        const double b = g == kForgetGate ? 1.0 : 0.0;
        for (auto& v : dir->bias[g].mutable_values()) v = b;
      }
    }
  }
}

void EncoderParams::append(const std::string& prefix, ParamList& out) const {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string base = prefix + ".l" + std::to_string(l);
    layers[l].forward.append(base + ".fwd", out);
    layers[l].backward.append(base + ".bwd", out);
  }
}

LstmState zero_state(std::size_t hidden) {
  return {Tensor({1, hidden}), Tensor({1, hidden})};
}

LstmState lstm_cell(const Tensor& x, const LstmState& prev,
                    const LstmDirectionParams& p) {
  if (x.rank() != 2 || x.dim(0) != 1 || x.dim(1) != p.input_size()) {
    throw DimensionError("lstm_cell: input " + shape_to_string(x.shape()) +
                         " does not match input size " +
                         std::to_string(p.input_size()));
  }
  if (prev.h.shape() != Shape{1, p.hidden()} ||
      prev.c.shape() != Shape{1, p.hidden()}) {
    throw DimensionError("lstm_cell: state shapes " +
                         shape_to_string(prev.h.shape()) + ", " +
                         shape_to_string(prev.c.shape()) +
                         " do not match hidden size " +
                         std::to_string(p.hidden()));
  }
  std::array<Tensor, 4> projected;
  for (int g = 0; g < 4; ++g) {
    projected[g] = add_bias(matmul_nt(x, p.w_input[g]), p.bias[g]);
  }
  return step(projected, prev, p);
}

Tensor bilstm_layer(const Tensor& inputs, const BiLstmLayerParams& p) {
  if (inputs.rank() != 2 || inputs.dim(0) == 0) {
    throw DomainError("bilstm_layer: expected a non-empty [n x in] sequence");
  }
  if (inputs.dim(1) != p.forward.input_size()) {
    throw DimensionError("bilstm_layer: input " +
                         shape_to_string(inputs.shape()) +
                         " does not match input size " +
                         std::to_string(p.forward.input_size()));
  }
  const auto fwd = run_direction(inputs, p.forward, false);
  const auto bwd = run_direction(inputs, p.backward, true);
  return concat(stack_rows(fwd), stack_rows(bwd));
}

Tensor encode(const Tensor& embeddings, const EncoderParams& p) {
  Tensor h = embeddings;
  for (const auto& layer : p.layers) h = bilstm_layer(h, layer);
  return h;
}

}  // namespace efp
