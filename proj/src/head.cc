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

#include "efp/head.h"

#include <algorithm>
#include <cmath>

#include "efp/errors.h"

namespace efp {

HeadParams::HeadParams(std::size_t input_dim, std::size_t attention_dim,
                       std::size_t regressor_dim, bool with_attention,
                       Activation act)
    : activation(act) {
  if (input_dim == 0 || attention_dim == 0 || regressor_dim == 0) {
    throw ConfigError("head dimensions must be positive");
  }
  if (with_attention) {
    w_query = make_param({attention_dim, input_dim});
    b_query = make_param({attention_dim});
    w_key = make_param({attention_dim, input_dim});
    b_key = make_param({attention_dim});
  }
  w_value = make_param({attention_dim, input_dim});
  b_value = make_param({attention_dim});
  w_hidden = make_param({regressor_dim, attention_dim});
  b_hidden = make_param({regressor_dim});
  w_out = make_param({1, regressor_dim});
  b_out = make_param({1});
}

void HeadParams::initialize(Rng& rng) {
  if (has_attention()) {
    init_fan_in(w_query, rng);
    init_fan_in(w_key, rng);
  }
  init_fan_in(w_value, rng);
  init_fan_in(w_hidden, rng);
  init_fan_in(w_out, rng);
}

void HeadParams::append(const std::string& prefix, ParamList& out) const {
  if (has_attention()) {
    out.push_back({prefix + ".W_query", w_query});
    out.push_back({prefix + ".b_query", b_query});
    out.push_back({prefix + ".W_key", w_key});
    out.push_back({prefix + ".b_key", b_key});
  }
  out.push_back({prefix + ".W_value", w_value});
  out.push_back({prefix + ".b_value", b_value});
  out.push_back({prefix + ".W_hidden", w_hidden});
  out.push_back({prefix + ".b_hidden", b_hidden});
  out.push_back({prefix + ".W_out", w_out});
  out.push_back({prefix + ".b_out", b_out});
}

namespace {

void check_anchor(const Tensor& hidden, std::size_t anchor, const HeadParams& p) {
  if (hidden.rank() != 2 || hidden.dim(1) != p.w_value.dim(1)) {
    throw DimensionError("head: hidden " + shape_to_string(hidden.shape()) +
                         " does not match " + shape_to_string(p.w_value.shape()));
  }
  if (anchor >= hidden.dim(0)) {
    throw ContractError("anchor " + std::to_string(anchor) +
                        " out of range for sentence of length " +
                        std::to_string(hidden.dim(0)));
  }
}

}  // namespace

Pooled attention_pool(const Tensor& hidden, std::size_t anchor,
                      const HeadParams& p) {
  if (!p.has_attention()) {
    throw ContractError("attention_pool: head was built without attention");
  }
  check_anchor(hidden, anchor, p);
  const std::size_t n = hidden.dim(0);
  const Tensor query = add_bias(matmul_nt(row(hidden, anchor), p.w_query), p.b_query);
  const Tensor keys = add_bias(matmul_nt(hidden, p.w_key), p.b_key);
  const Tensor scores = reshape(matmul_nt(keys, query), {n});
  Tensor weights = softmax(scores);
  const Tensor values = add_bias(matmul_nt(hidden, p.w_value), p.b_value);
  Tensor feature = matmul(reshape(weights, {1, n}), values);
  return {std::move(feature), std::move(weights)};
}

Pooled anchor_feature(const Tensor& hidden, std::size_t anchor,
                      const HeadParams& p) {
  check_anchor(hidden, anchor, p);
  std::vector<double> onehot(hidden.dim(0), 0.0);
  onehot[anchor] = 1.0;
  Tensor feature = add_bias(matmul_nt(row(hidden, anchor), p.w_value), p.b_value);
  return {std::move(feature), Tensor::vector(std::move(onehot))};
}

Tensor regress(const Tensor& feature, const HeadParams& p) {
  if (feature.numel() != p.w_hidden.dim(1)) {
    throw DimensionError("regress: feature " + shape_to_string(feature.shape()) +
                         " does not match " + shape_to_string(p.w_hidden.shape()));
  }
  const Tensor v = reshape(feature, {1, feature.numel()});
  const Tensor hidden =
      activate(add_bias(matmul_nt(v, p.w_hidden), p.b_hidden), p.activation);
  return reshape(add_bias(matmul_nt(hidden, p.w_out), p.b_out), {1});
}

double huber_value(double error, double delta) {
  if (!(delta > 0.0)) throw ConfigError("Huber delta must be positive");
  const double a = std::abs(error);
  return a <= delta ? 0.5 * error * error : delta * (a - 0.5 * delta);
}

double huber_derivative(double error, double delta) {
  if (!(delta > 0.0)) throw ConfigError("Huber delta must be positive");
  return std::clamp(error, -delta, delta);
}

Tensor huber_loss(const Tensor& pred, double gold, double delta) {
  if (!(delta > 0.0)) throw ConfigError("Huber delta must be positive");
  const Tensor error = sub(pred, Tensor::scalar(gold));
  return map(
      error, [delta](double e) { return huber_value(e, delta); },
      [delta](double e) { return huber_derivative(e, delta); });
}

}  // namespace efp
