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

#include "efp/cli.h"
#include "efp/errors.h"
#include "efp/model.h"

namespace efp {
namespace {

ModelConfig small() {
  ModelConfig c;
  c.embed_dim = 4;
  c.hidden = 3;
  c.proj = 4;
  c.gcn_features = 3;
  c.attention = 4;
  c.regressor = 3;
  return c;
}

TEST(Model, ParameterSetsFollowAblations) {
  Model full(small());
  ModelConfig c = small();
  c.no_structure = true;
  Model bare(c);
  EXPECT_FALSE(bare.structure.has_value());
  EXPECT_FALSE(bare.gcn.has_value());
  EXPECT_LT(bare.num_scalars(), full.num_scalars());
  for (const auto& p : bare.parameters()) {
    EXPECT_EQ(p.name.find("structure"), std::string::npos);
    EXPECT_EQ(p.name.find("gcn"), std::string::npos);
  }
  c = small();
  c.no_attention = true;
  Model no_att(c);
  EXPECT_FALSE(no_att.head.has_attention());
}

TEST(Model, ForwardShapesAndAttentionDistribution) {
  Model m(small());
  m.initialize(3);
  const PreparedInstance inst = gradcheck_sentence(4, 1);
  const ForwardResult r = m.forward(inst);
  EXPECT_EQ(r.score.numel(), 1u);
  EXPECT_EQ(r.attention.numel(), 4u);
  EXPECT_EQ(r.encoded.shape(), (Shape{4, 6}));
  EXPECT_EQ(r.propagated.shape(), (Shape{4, 3}));
  ASSERT_TRUE(r.structure.has_value());
  double total = 0.0;
  for (double a : r.attention.values()) total += a;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(m.predict(inst), r.score.item());
}

TEST(Model, InitializationIsSeeded) {
  Model a(small()), b(small()), c(small());
  a.initialize(5);
  b.initialize(5);
  c.initialize(6);
  EXPECT_EQ(a.snapshot(), b.snapshot());
  EXPECT_NE(a.snapshot(), c.snapshot());
}

TEST(Model, CloneIsIndependent) {
  Model a(small());
  a.initialize(1);
  Model b = a.clone();
  EXPECT_EQ(a.snapshot(), b.snapshot());
  b.parameters()[0].tensor.mutable_values()[0] += 1.0;
  EXPECT_NE(a.snapshot(), b.snapshot());
}

TEST(Model, SnapshotRestore) {
  Model a(small());
  a.initialize(1);
  const PreparedInstance inst = gradcheck_sentence(4, 2);
  const ParamSnapshot snap = a.snapshot();
  const double before = a.predict(inst);
  a.initialize(99);
  EXPECT_NE(a.predict(inst), before);
  a.restore(snap);
  EXPECT_EQ(a.predict(inst), before);
  EXPECT_THROW(a.restore({}), ContractError);
}

TEST(Model, LambdaValidation) {
  Model a(small());
  EXPECT_THROW(a.set_lambda(1.2), ConfigError);
  ModelConfig c = small();
  c.hidden = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Model, EmbeddingWidthMismatchThrows) {
  Model a(small());
  a.initialize(1);
  EXPECT_THROW(a.forward(gradcheck_sentence(5, 1)), DimensionError);
}

TEST(Model, FullGradientCheck) {
  for (bool no_structure : {false, true}) {
    ModelConfig c = small();
    c.no_structure = no_structure;
    c.gcn_activation = Activation::kTanh;
    c.head_activation = Activation::kTanh;
    const GradcheckOutcome out = gradcheck_model(c, 3);
    EXPECT_LT(out.report.max_rel_error, 1e-6);
    EXPECT_EQ(out.report.one_sided, 0u);
  }
}

}  // namespace
}  // namespace efp
