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


#include <vector>

#include <gtest/gtest.h>

#include "efp/errors.h"
#include "efp/gcn.h"
#include "efp/grad_check.h"
#include "efp/rng.h"

namespace efp {
namespace {

std::vector<double> vals(const Tensor& t) { return {t.values().begin(), t.values().end()}; }

Tensor random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0) {
  std::vector<double> v(r * c);
  for (auto& x : v) x = rng.uniform(lo, 1.0);
  return Tensor::matrix(r, c, v);
}

TEST(GcnLayer, IdentityAdjacencyAndWeight) {
  Rng rng(1);
  const Tensor h = random_matrix(3, 3, rng, 0.0);
  const Tensor eye = Tensor::matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  EXPECT_EQ(vals(gcn_layer(eye, h, eye, Tensor::vector({0, 0, 0}))), vals(h));
  EXPECT_EQ(vals(gcn_layer(eye, h, eye, Tensor::vector({0, 0, 0}), Activation::kTanh)),
            vals(tanh(h)));
}

TEST(GcnLayer, ZeroAdjacencyGivesActivatedBias) {
  Rng rng(2);
  const Tensor out = gcn_layer(Tensor({2, 2}), random_matrix(2, 3, rng), random_matrix(3, 2, rng),
                               Tensor::vector({-1, 2}));
  EXPECT_EQ(vals(out), (std::vector<double>{0, 2, 0, 2}));
}

TEST(GcnLayer, ZeroWeights) {
  Rng rng(3);
  const Tensor out = gcn_layer(random_matrix(4, 4, rng), random_matrix(4, 3, rng),
                               Tensor({3, 5}), Tensor({5}));
  for (double v : vals(out)) EXPECT_EQ(v, 0.0);
}

TEST(GcnLayer, ShapeMismatchThrows) {
  EXPECT_THROW(gcn_layer(Tensor({3, 3}), Tensor({2, 4}), Tensor({4, 2}), Tensor({2})),
               DimensionError);
}

TEST(GcnStack, ShapeNonnegativeAndSingleNode) {
  Rng rng(4);
  GcnParams p(6, 5, 2);
  p.initialize(rng);
  const Tensor out = gcn_stack(random_matrix(7, 7, rng, 0.0), random_matrix(7, 6, rng), p);
  EXPECT_EQ(out.shape(), (Shape{7, 5}));
  EXPECT_EQ(p.output_dim(), 5u);
  for (double v : vals(out)) EXPECT_GE(v, 0.0);
  EXPECT_EQ(gcn_stack(Tensor::matrix(1, 1, {1}), random_matrix(1, 6, rng), p).shape(),
            (Shape{1, 5}));
}

TEST(GcnStack, GradientMatchesFiniteDifferences) {
  Rng rng(5);
  GcnParams p(4, 3, 2, Activation::kTanh);
  p.initialize(rng);
  std::vector<double> av(16);
  for (auto& x : av) x = rng.uniform(0.0, 1.0);
  Tensor a(Shape{4, 4}, av, true);
  const Tensor h = random_matrix(4, 4, rng);
  const Tensor w = random_matrix(4, 3, rng);
  std::vector<Tensor> params = {a};
  for (const auto& l : p.layers) {
    params.push_back(l.weight);
    params.push_back(l.bias);
  }
  auto loss = [&] { return sum(mul(gcn_stack(a, h, p), w)); };
  EXPECT_LT(grad_check(loss, params, 1e-5).max_rel_error, 1e-6);
}

}  // namespace
}  // namespace efp
