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

// Stacked bidirectional LSTM sentence encoder.

#ifndef EFP_ENCODER_H_
#define EFP_ENCODER_H_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "efp/params.h"
#include "efp/rng.h"
#include "efp/tensor.h"

namespace efp {

// Gate order used by every array below.
enum Gate { kInputGate = 0, kForgetGate = 1, kOutputGate = 2, kCandidate = 3 };

struct LstmDirectionParams {
  std::array<Tensor, 4> w_input;   // [H x in]
  std::array<Tensor, 4> w_hidden;  // [H x H]
  std::array<Tensor, 4> bias;      // [H]

  LstmDirectionParams() = default;
  LstmDirectionParams(std::size_t input_size, std::size_t hidden);

  std::size_t input_size() const { return w_input[0].dim(1); }
  std::size_t hidden() const { return w_hidden[0].dim(0); }
  void append(const std::string& prefix, ParamList& out) const;
};

struct BiLstmLayerParams {
  LstmDirectionParams forward;
  LstmDirectionParams backward;
};

struct EncoderParams {
  std::vector<BiLstmLayerParams> layers;

  EncoderParams() = default;
  // Layer 0 reads `input_dim`, later layers read 2 * hidden.
  EncoderParams(std::size_t input_dim, std::size_t hidden, std::size_t num_layers = 2);

  std::size_t output_dim() const { return 2 * layers.front().forward.hidden(); }
  // Weights uniform in +-1/sqrt(fan_in); biases zero except forget = 1.
  void initialize(Rng& rng);
  void append(const std::string& prefix, ParamList& out) const;
};

struct LstmState {
  Tensor h;  // [1 x H]
  Tensor c;  // [1 x H]
};

LstmState zero_state(std::size_t hidden);

// One step: gates from x [1 x in] and the previous state.
LstmState lstm_cell(const Tensor& x, const LstmState& prev,
                    const LstmDirectionParams& p);

// inputs [n x in] -> [n x 2H]; row t is [forward h_t, backward h_t].
Tensor bilstm_layer(const Tensor& inputs, const BiLstmLayerParams& p);

// Runs every layer. Returns H0 [n x 2H].
Tensor encode(const Tensor& embeddings, const EncoderParams& p);

}  // namespace efp

#endif  // EFP_ENCODER_H_
