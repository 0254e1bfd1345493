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

// The full factuality regressor: encoder -> structure induction -> GCN ->
// attention head.

#ifndef EFP_MODEL_H_
#define EFP_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "efp/corpus.h"
#include "efp/encoder.h"
#include "efp/gcn.h"
#include "efp/head.h"
#include "efp/params.h"
#include "efp/structure.h"
#include "efp/tensor.h"

namespace efp {

struct ModelConfig {
  std::size_t embed_dim = 0;      // D, fixed by the embedding table
  std::size_t hidden = 16;        // H per LSTM direction
  std::size_t proj = 32;          // P, projected h'
  std::size_t gcn_features = 16;  // F
  std::size_t attention = 32;     // T
  std::size_t regressor = 16;     // R
  std::size_t encoder_layers = 2;
  std::size_t gcn_layers = 2;
  double lambda = 0.6;
  bool no_structure = false;  // head reads encoder states directly
  bool no_attention = false;  // head reads the anchor row only
  bool row_normalize = false;
  // Initial value of the semantic scorer's bias; sigmoid(b) is the starting
  // weight of every token pair.
  double affinity_bias_init = 0.0;
  Activation gcn_activation = Activation::kRelu;
  Activation head_activation = Activation::kRelu;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// A SentenceInstance with its embedding matrix and syntactic adjacency
// resolved once, so training epochs do not repeat the lookups.
struct PreparedInstance {
  std::string sentence_id;
  std::vector<Token> tokens;
  std::size_t anchor = 0;
  double gold = 0.0;
  Tensor embeddings;  // [n x D], constant
  Tensor syntactic;   // [n x n], constant
};

PreparedInstance prepare_instance(const SentenceInstance& inst,
                                  const EmbeddingTable& table);
std::vector<PreparedInstance> prepare_instances(
    const std::vector<SentenceInstance>& insts, const EmbeddingTable& table);

struct ForwardResult {
  Tensor score;       // [1]
  Tensor attention;   // alpha', [n]
  Tensor encoded;     // H0, [n x 2H]
  Tensor propagated;  // rows fed to the head: H2, or H0 without structure
  std::optional<AffinityMatrices> structure;
};

using ParamSnapshot = std::vector<std::vector<double>>;

class Model {
 public:
  explicit Model(const ModelConfig& config);
  // Parameters are shared handles; copies would alias. Use clone().
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;
  Model(Model&&) = default;
  Model& operator=(Model&&) = default;

  Model clone() const;

  const ModelConfig& config() const { return config_; }
  // lambda is not a parameter, so it may change between forward passes.
  void set_lambda(double lambda);

  // Seeded initialization of every weight; biases zero (forget gate 1).
  void initialize(std::uint64_t seed);

  // Stable order; names are used by checkpoints.
  ParamList parameters() const;
  std::size_t num_scalars() const { return count_scalars(parameters()); }

  ForwardResult forward(const PreparedInstance& inst) const;
  // Everything after the encoder, for tests that inject hidden states.
  ForwardResult forward_encoded(const Tensor& encoded, const Tensor& syntactic,
                                std::size_t anchor) const;
  double predict(const PreparedInstance& inst) const;

  ParamSnapshot snapshot() const;
  void restore(const ParamSnapshot& snap);
  void zero_grad();

  EncoderParams encoder;
  std::optional<StructureParams> structure;
  std::optional<GcnParams> gcn;
  HeadParams head;

 private:
  ModelConfig config_;
};

}  // namespace efp

#endif  // EFP_MODEL_H_
