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

#include "efp/structure.h"

#include <cstdio>
#include <vector>

#include "efp/errors.h"

namespace efp {

StructureParams::StructureParams(std::size_t input_dim, std::size_t proj_dim)
    : w_proj(make_param({proj_dim, input_dim})),
      b_proj(make_param({proj_dim})),
      w_score(make_param({1, 2 * proj_dim})),
      b_score(make_param({1})) {}

void StructureParams::initialize(Rng& rng, double score_bias) {
  init_fan_in(w_proj, rng);
  init_fan_in(w_score, rng);
  b_score.mutable_values()[0] = score_bias;
}

void StructureParams::append(const std::string& prefix, ParamList& out) const {
  out.push_back({prefix + ".W_proj", w_proj});
  out.push_back({prefix + ".b_proj", b_proj});
  out.push_back({prefix + ".W_score", w_score});
  out.push_back({prefix + ".b_score", b_score});
}

Tensor semantic_affinity(const Tensor& hidden, const StructureParams& p) {
  if (hidden.rank() != 2 || hidden.dim(1) != p.w_proj.dim(1)) {
    throw DimensionError("semantic_affinity: hidden states " +
                         shape_to_string(hidden.shape()) +
                         " do not match projection " +
                         shape_to_string(p.w_proj.shape()));
  }
  const std::size_t n = hidden.dim(0);
  const std::size_t proj = p.proj_dim();
  const Tensor projected = tanh(add_bias(matmul_nt(hidden, p.w_proj), p.b_proj));
  const Tensor from_i = matmul_nt(projected, slice_cols(p.w_score, 0, proj));
  const Tensor to_j = matmul_nt(projected, slice_cols(p.w_score, proj, 2 * proj));
  // grid[i][j] = from_i[i] + to_j[j]
  const Tensor grid = add(matmul(from_i, Tensor::ones({1, n})),
                          matmul_nt(Tensor::ones({n, 1}), to_j));
  return sigmoid(add(grid, p.b_score));
}

Tensor syntactic_adjacency(std::span<const Token> tokens,
                           const std::string& sentence_id) {
  validate_tree(sentence_id, tokens);
  const std::size_t n = tokens.size();
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = 1.0;
    if (const auto h = tokens[i].head) {
      a[i * n + *h] = 1.0;
      a[*h * n + i] = 1.0;
    }
  }
  return Tensor({n, n}, std::move(a));
}

Tensor blend(const Tensor& semantic, const Tensor& syntactic, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("lambda " + std::to_string(lambda) + " outside [0, 1]");
  }
  if (semantic.shape() != syntactic.shape()) {
    throw DimensionError("blend: " + shape_to_string(semantic.shape()) +
                         " vs " + shape_to_string(syntactic.shape()));
  }
  return add(scale(semantic, lambda), scale(syntactic.detach(), 1.0 - lambda));
}

AffinityMatrices induce_structure(const Tensor& hidden, const Tensor& syntactic,
                                  const StructureParams& p, double lambda,
                                  bool row_normalize) {
  AffinityMatrices out;
  out.lambda = lambda;
  out.semantic = semantic_affinity(hidden, p);
  out.syntactic = syntactic;
  out.blended = blend(out.semantic, syntactic, lambda);
  if (row_normalize) out.blended = normalize_rows(out.blended);
  return out;
}

void write_matrix_tsv(std::ostream& os, const Tensor& m) {
  if (m.rank() != 2) throw DimensionError("write_matrix_tsv: not a matrix");
  char buf[32];
  for (std::size_t i = 0; i < m.dim(0); ++i) {
    for (std::size_t j = 0; j < m.dim(1); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m.at(i, j));
      if (j > 0) os << '\t';
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace efp
