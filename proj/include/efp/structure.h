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

// Affinity matrices for graph propagation.
//
// Entry [i][j] of each matrix weighs how much token i contributes to the
// representation of token j. The semantic matrix is learned from encoder
// states; the syntactic one is the dependency tree with self-loops and
// reverse edges; the two are blended with a fixed weight lambda.

#ifndef EFP_STRUCTURE_H_
#define EFP_STRUCTURE_H_

#include <cstddef>
#include <ostream>
#include <span>
#include <string>

#include "efp/corpus.h"
#include "efp/params.h"
#include "efp/rng.h"
#include "efp/tensor.h"

namespace efp {

struct StructureParams {
  Tensor w_proj;   // [P x 2H]
  Tensor b_proj;   // [P]
  Tensor w_score;  // [1 x 2P], left half scores h'_i, right half h'_j
  Tensor b_score;  // [1]

  StructureParams() = default;
  StructureParams(std::size_t input_dim, std::size_t proj_dim);

  std::size_t proj_dim() const { return w_proj.dim(0); }
  void initialize(Rng& rng, double score_bias = 0.0);
  void append(const std::string& prefix, ParamList& out) const;
};

struct AffinityMatrices {
  Tensor semantic;   // [n x n], entries in (0, 1)
  Tensor syntactic;  // [n x n], binary, symmetric, unit diagonal
  Tensor blended;    // lambda * semantic + (1 - lambda) * syntactic
  double lambda = 0.0;
};

// a[i][j] = sigmoid(w_score . [tanh(W h_i + b), tanh(W h_j + b)] + b_score).
//
// The score is linear in the concatenation, so it is evaluated as
// left.h'_i + right.h'_j broadcast over an n x n grid instead of
// materializing n^2 concatenated vectors.
Tensor semantic_affinity(const Tensor& hidden, const StructureParams& p);

// 1 where i == j, head(i) == j or head(j) == i; 0 elsewhere. Constant.
Tensor syntactic_adjacency(std::span<const Token> tokens,
                           const std::string& sentence_id = "");

// Throws ConfigError unless lambda is in [0, 1]. Gradient reaches only
// `semantic`.
Tensor blend(const Tensor& semantic, const Tensor& syntactic, double lambda);

// Convenience: builds all three matrices, optionally row-normalizing the
// blended one.
AffinityMatrices induce_structure(const Tensor& hidden, const Tensor& syntactic,
                                  const StructureParams& p, double lambda,
                                  bool row_normalize = false);

// n header-less rows of n tab-separated decimals.
void write_matrix_tsv(std::ostream& os, const Tensor& m);

}  // namespace efp

#endif  // EFP_STRUCTURE_H_
