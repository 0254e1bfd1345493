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

// Anchor-query attention pooling, feed-forward regressor and Huber loss.

#ifndef EFP_HEAD_H_
#define EFP_HEAD_H_

#include <cstddef>
#include <string>

#include "efp/params.h"
#include "efp/rng.h"
#include "efp/tensor.h"

namespace efp {

struct HeadParams {
  // Attention maps, [T x F] each. query/key are absent when attention is
  // disabled.
  Tensor w_query, b_query;
  Tensor w_key, b_key;
  Tensor w_value, b_value;
  // Regressor: [R x T] then [1 x R].
  Tensor w_hidden, b_hidden;
  Tensor w_out, b_out;
  Activation activation = Activation::kRelu;

  HeadParams() = default;
  HeadParams(std::size_t input_dim, std::size_t attention_dim,
             std::size_t regressor_dim, bool with_attention = true,
             Activation act = Activation::kRelu);

  bool has_attention() const { return w_query.defined(); }
  void initialize(Rng& rng);
  void append(const std::string& prefix, ParamList& out) const;
};

struct Pooled {
  Tensor feature;  // V, [1 x T]
  Tensor weights;  // alpha', [n]
};

// score_i = (Wq h_k + bq) . (Wk h_i + bk); alpha' = softmax(score);
// V = sum_i alpha'_i (Wv h_i + bv).
Pooled attention_pool(const Tensor& hidden, std::size_t anchor,
                      const HeadParams& p);

// Attention-free variant: V = Wv h_k + bv, weights one-hot on the anchor.
Pooled anchor_feature(const Tensor& hidden, std::size_t anchor,
                      const HeadParams& p);

// w_out . g(w_hidden V + b_hidden) + b_out, shape [1]. Unclamped.
Tensor regress(const Tensor& feature, const HeadParams& p);

// e = pred - gold; 0.5 e^2 for |e| <= delta, delta (|e| - delta / 2) beyond.
Tensor huber_loss(const Tensor& pred, double gold, double delta = 1.0);
double huber_value(double error, double delta = 1.0);
// d/de of huber_value: e clipped to [-delta, delta].
double huber_derivative(double error, double delta = 1.0);

}  // namespace efp

#endif  // EFP_HEAD_H_
