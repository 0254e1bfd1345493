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

#include "efp/model.h"

#include <algorithm>

#include "efp/errors.h"
#include "efp/rng.h"

namespace efp {

void ModelConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(embed_dim, "embed_dim");
  positive(hidden, "hidden");
  positive(proj, "proj");
  positive(gcn_features, "gcn_features");
  positive(attention, "attention");
  positive(regressor, "regressor");
  positive(encoder_layers, "encoder_layers");
  positive(gcn_layers, "gcn_layers");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("lambda " + std::to_string(lambda) + " outside [0, 1]");
  }
}

PreparedInstance prepare_instance(const SentenceInstance& inst,
                                  const EmbeddingTable& table) {
  const std::size_t n = inst.tokens.size();
  if (n == 0) throw DomainError("instance '" + inst.sentence_id + "' is empty");
  if (inst.anchor_index >= n) {
    throw AlignmentError("instance '" + inst.sentence_id + "': anchor " +
                         std::to_string(inst.anchor_index) + " out of bounds");
  }
  std::vector<double> emb;
  emb.reserve(n * table.dim());
  for (const auto& t : inst.tokens) {
    const auto& v = table.lookup(t.form);
    emb.insert(emb.end(), v.begin(), v.end());
  }
  PreparedInstance out;
  out.sentence_id = inst.sentence_id;
  out.tokens = inst.tokens;
  out.anchor = inst.anchor_index;
  out.gold = inst.gold_score;
  out.embeddings = Tensor({n, table.dim()}, std::move(emb));
  out.syntactic = syntactic_adjacency(inst.tokens, inst.sentence_id);
  return out;
}

std::vector<PreparedInstance> prepare_instances(
    const std::vector<SentenceInstance>& insts, const EmbeddingTable& table) {
  std::vector<PreparedInstance> out;
  out.reserve(insts.size());
  for (const auto& i : insts) out.push_back(prepare_instance(i, table));
  return out;
}

Model::Model(const ModelConfig& config) : config_(config) {
  config_.validate();
  encoder = EncoderParams(config_.embed_dim, config_.hidden, config_.encoder_layers);
  std::size_t head_input = encoder.output_dim();
  if (!config_.no_structure) {
    structure.emplace(encoder.output_dim(), config_.proj);
    gcn.emplace(encoder.output_dim(), config_.gcn_features, config_.gcn_layers,
                config_.gcn_activation);
    head_input = gcn->output_dim();
  }
  head = HeadParams(head_input, config_.attention, config_.regressor,
                    !config_.no_attention, config_.head_activation);
}

Model Model::clone() const {
  Model copy(config_);
  copy.restore(snapshot());
  return copy;
}

void Model::set_lambda(double lambda) {
  ModelConfig c = config_;
  c.lambda = lambda;
  c.validate();
  config_ = c;
}

void Model::initialize(std::uint64_t seed) {
  Rng rng(seed);
  encoder.initialize(rng);
  if (structure) structure->initialize(rng, config_.affinity_bias_init);
  if (gcn) gcn->initialize(rng);
  head.initialize(rng);
}

ParamList Model::parameters() const {
  ParamList out;
  encoder.append("encoder", out);
  if (structure) structure->append("structure", out);
  if (gcn) gcn->append("gcn", out);
  head.append("head", out);
  return out;
}

ForwardResult Model::forward(const PreparedInstance& inst) const {
  if (inst.embeddings.dim(1) != config_.embed_dim) {
    throw DimensionError("instance '" + inst.sentence_id + "' embeddings " +
                         shape_to_string(inst.embeddings.shape()) +
                         " do not match model embed_dim " +
                         std::to_string(config_.embed_dim));
  }
  return forward_encoded(encode(inst.embeddings, encoder), inst.syntactic,
                         inst.anchor);
}

ForwardResult Model::forward_encoded(const Tensor& encoded,
                                     const Tensor& syntactic,
                                     std::size_t anchor) const {
  ForwardResult out;
  out.encoded = encoded;
  if (structure) {
    out.structure = induce_structure(encoded, syntactic, *structure,
                                     config_.lambda, config_.row_normalize);
    out.propagated = gcn_stack(out.structure->blended, encoded, *gcn);
  } else {
    out.propagated = encoded;
  }
  Pooled pooled = head.has_attention()
                      ? attention_pool(out.propagated, anchor, head)
                      : anchor_feature(out.propagated, anchor, head);
  out.attention = pooled.weights;
  out.score = regress(pooled.feature, head);
  return out;
}

double Model::predict(const PreparedInstance& inst) const {
  return forward(inst).score.item();
}

ParamSnapshot Model::snapshot() const {
  ParamSnapshot snap;
  for (const auto& p : parameters()) {
    const auto v = p.tensor.values();
    snap.emplace_back(v.begin(), v.end());
  }
  return snap;
}

void Model::restore(const ParamSnapshot& snap) {
  auto params = parameters();
  if (snap.size() != params.size()) {
    throw ContractError("snapshot has " + std::to_string(snap.size()) +
                        " tensors, model has " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto dst = params[i].tensor.mutable_values();
    if (dst.size() != snap[i].size()) {
      throw ContractError("snapshot size mismatch for " + params[i].name);
    }
    std::copy(snap[i].begin(), snap[i].end(), dst.begin());
  }
}

void Model::zero_grad() {
  for (auto& p : parameters()) p.tensor.zero_grad();
}

}  // namespace efp
