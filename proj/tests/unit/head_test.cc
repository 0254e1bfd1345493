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


#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "efp/grad_check.h"
#include "efp/head.h"
#include "efp/rng.h"

namespace efp {
namespace {

std::vector<double> vals(const Tensor& t) { return {t.values().begin(), t.values().end()}; }

Tensor random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  std::vector<double> v(r * c);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return Tensor::matrix(r, c, v);
}

HeadParams seeded_head(std::size_t in, bool attention, std::uint64_t seed) {
  HeadParams p(in, 4, 3, attention);
  Rng rng(seed);
  p.initialize(rng);
  return p;
}

TEST(Attention, SingleTokenHasWeightOne) {
  Rng rng(1);
  const Pooled out = attention_pool(random_matrix(1, 5, rng), 0, seeded_head(5, true, 2));
  EXPECT_EQ(vals(out.weights), (std::vector<double>{1.0}));
  EXPECT_EQ(out.feature.shape(), (Shape{1, 4}));
}

TEST(Attention, IdenticalRowsGiveUniformWeights) {
  Rng rng(3);
  const Tensor r = random_matrix(1, 5, rng);
  const Tensor h = concat(concat(r, r), r);  // concat is along columns
  const Tensor rows = reshape(h, {3, 5});
  for (double w : vals(attention_pool(rows, 1, seeded_head(5, true, 4)).weights)) {
    EXPECT_NEAR(w, 1.0 / 3, 1e-15);
  }
}

TEST(Attention, PermutationEquivariance) {
  Rng rng(5);
  const HeadParams p = seeded_head(3, true, 6);
  const Tensor h = random_matrix(4, 3, rng);
  const std::vector<std::size_t> perm = {2, 0, 3, 1};
  std::vector<double> pv;
  for (std::size_t i : perm)
    for (std::size_t k = 0; k < 3; ++k) pv.push_back(h.at(i, k));
  const Tensor hp = Tensor::matrix(4, 3, pv);
  // Anchor 0 of h is row 1 of hp.
  const Pooled a = attention_pool(h, 0, p), b = attention_pool(hp, 1, p);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(a.feature.at(0, k), b.feature.at(0, k), 1e-14);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(b.weights.values()[i], a.weights.values()[perm[i]], 1e-15);
}

TEST(Attention, NoAttentionIsOneHotOnAnchor) {
  Rng rng(7);
  const HeadParams p = seeded_head(3, false, 8);
  EXPECT_FALSE(p.has_attention());
  const Tensor h = random_matrix(4, 3, rng);
  const Pooled out = anchor_feature(h, 2, p);
  EXPECT_EQ(vals(out.weights), (std::vector<double>{0, 0, 1, 0}));
  const Tensor want = add_bias(matmul_nt(row(h, 2), p.w_value), p.b_value);
  EXPECT_EQ(vals(out.feature), vals(want));
}

TEST(Attention, AnchorOutOfRangeThrows) {
  Rng rng(9);
  EXPECT_ANY_THROW(attention_pool(random_matrix(2, 3, rng), 2, seeded_head(3, true, 1)));
}

TEST(Regress, ZeroParamsAndToyExample) {
  HeadParams p(2, 1, 1);
  EXPECT_EQ(regress(Tensor::matrix(1, 1, {5.0}), p).item(), 0.0);
  // relu(1 * 2 + 0) * 1 + 0 = 2
  p.w_hidden.mutable_values()[0] = 1.0;
  p.w_out.mutable_values()[0] = 1.0;
  EXPECT_EQ(regress(Tensor::matrix(1, 1, {2.0}), p).item(), 2.0);
}

TEST(Huber, Examples) {
  EXPECT_EQ(huber_value(0.0), 0.0);
  EXPECT_EQ(huber_value(0.5), 0.125);
  EXPECT_EQ(huber_value(-3.0), 2.5);
  EXPECT_EQ(huber_loss(Tensor::scalar(1.0), 4.0).item(), 2.5);
  EXPECT_EQ(huber_derivative(0.3), 0.3);
  EXPECT_EQ(huber_derivative(-7.0), -1.0);
}

TEST(Huber, ContinuousWithBoundedGradient) {
  for (double delta : {0.5, 1.0, 2.0}) {
    for (double s : {-1.0, 1.0}) {
      const double at = s * delta;
      EXPECT_NEAR(huber_value(at - 1e-9, delta), huber_value(at + 1e-9, delta), 1e-8);
    }
    Rng rng(10);
    for (int t = 0; t < 100; ++t) {
      const double e = rng.uniform(-10, 10);
      Tensor pred = Tensor::scalar(e, true);
      huber_loss(pred, 0.0, delta).backward();
      EXPECT_LE(std::abs(pred.grad()[0]), delta);
      EXPECT_DOUBLE_EQ(pred.grad()[0], huber_derivative(e, delta));
    }
  }
}

TEST(Head, GradientMatchesFiniteDifferences) {
  Rng rng(11);
  HeadParams p(3, 4, 3, true, Activation::kTanh);
  p.initialize(rng);
  ParamList list;
  p.append("head", list);
  std::vector<Tensor> params;
  for (const auto& np : list) params.push_back(np.tensor);
  std::vector<double> hv(5 * 3);
  for (auto& x : hv) x = rng.uniform(-1, 1);
  Tensor h(Shape{5, 3}, hv, true);
  params.push_back(h);
  auto loss = [&] { return huber_loss(regress(attention_pool(h, 2, p).feature, p), 0.7, 1.0); };
  EXPECT_LT(grad_check(loss, params, 1e-5).max_rel_error, 1e-6);
}

}  // namespace
}  // namespace efp
