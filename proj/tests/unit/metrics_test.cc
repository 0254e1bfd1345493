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

#include "efp/errors.h"
#include "efp/metrics.h"
#include "support/test_util.h"

namespace efp {
namespace {

using V = std::vector<double>;

TEST(Mae, Examples) {
  EXPECT_DOUBLE_EQ(mae(V{1, 2, 3}, V{1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(mae(V{0, 0}, V{1, -3}), 2.0);
  EXPECT_THROW(mae(V{}, V{}), ContractError);
  EXPECT_THROW(mae(V{1}, V{1, 2}), ContractError);
}

TEST(Pearson, Examples) {
  EXPECT_NEAR(*pearson(V{1, 2, 3}, V{2, 4, 6}), 1.0, 1e-12);
  EXPECT_NEAR(*pearson(V{1, 2, 3}, V{3, 2, 1}), -1.0, 1e-12);
  EXPECT_FALSE(pearson(V{1, 1, 1}, V{1, 2, 3}).has_value());
  EXPECT_FALSE(pearson(V{1, 2, 3}, V{0, 0, 0}).has_value());
  EXPECT_THROW(pearson(V{1}, V{1}), ContractError);
}

TEST(Pearson, StableForLargeOffsets) {
  EXPECT_NEAR(*pearson(V{1e9 + 1, 1e9 + 2, 1e9 + 3}, V{1, 2, 3}), 1.0, 1e-9);
}

TEST(Metrics, PropertiesOnRandomVectors) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.below(50);
    V p(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = rng.uniform(-3, 3);
      g[i] = rng.uniform(-3, 3);
    }
    const double r = *pearson(p, g);
    EXPECT_NEAR(mae(p, g), test::oracle_mae(p, g), 1e-12);
    EXPECT_NEAR(r, test::oracle_pearson(p, g), 1e-9);
    EXPECT_LE(std::abs(r), 1.0);

    // Affine invariance of r, translation sensitivity of MAE.
    V q(n), shifted(n);
    for (std::size_t i = 0; i < n; ++i) {
      q[i] = 2.5 * p[i] - 7.0;
      shifted[i] = p[i] + 0.5;
    }
    EXPECT_NEAR(*pearson(q, g), r, 1e-9);
    EXPECT_NEAR(*pearson(shifted, g), r, 1e-9);
    EXPECT_NEAR(mae(shifted, p), 0.5, 1e-12);

    // Permuting pairs jointly changes nothing.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(std::span(idx));
    V pp(n), gp(n);
    for (std::size_t i = 0; i < n; ++i) {
      pp[i] = p[idx[i]];
      gp[i] = g[idx[i]];
    }
    EXPECT_NEAR(mae(pp, gp), mae(p, g), 1e-12);
    EXPECT_NEAR(*pearson(pp, gp), r, 1e-9);
  }
}

TEST(Report, AggregatesPredictions) {
  std::vector<InstancePrediction> preds = {{"a", 0, 1.0, 2.0, {}},
                                           {"b", 1, -1.0, -1.0, {}},
                                           {"c", 2, 3.0, 3.0, {}}};
  const EvalReport r = make_report(preds);
  EXPECT_EQ(r.n, 3u);
  EXPECT_NEAR(r.mae, 1.0 / 3, 1e-15);
  ASSERT_TRUE(r.pearson_r.has_value());
  EXPECT_THROW(make_report({}), ContractError);
}

}  // namespace
}  // namespace efp
