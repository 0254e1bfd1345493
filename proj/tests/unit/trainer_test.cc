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


#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "efp/cli.h"
#include "efp/errors.h"
#include "efp/trainer.h"
#include "support/test_util.h"

namespace efp {
namespace {

ModelConfig small(std::size_t embed_dim) {
  ModelConfig c;
  c.embed_dim = embed_dim;
  c.hidden = 4;
  c.proj = 4;
  c.gcn_features = 4;
  c.attention = 4;
  c.regressor = 4;
  return c;
}

test::PreparedCorpus tiny_corpus() {
  SynthSpec spec;
  spec.n_train = 6;
  spec.n_dev = 3;
  spec.n_test = 3;
  spec.embed_dim = 4;
  spec.cues = default_cues();
  return test::prepare_synth(generate_synth(spec));
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Tensor w = Tensor::vector({1.0, -2.0, 0.5}, true);
  Adam opt({{"w", w}}, AdamConfig{0.1, 0.9, 0.999, 1e-8});
  w.mutable_grad()[0] = 3.0;
  w.mutable_grad()[1] = -0.01;
  w.mutable_grad()[2] = 0.0;
  opt.step();
  EXPECT_NEAR(w.values()[0], 0.9, 1e-7);
  EXPECT_NEAR(w.values()[1], -1.9, 1e-5);
  EXPECT_EQ(w.values()[2], 0.5);
  for (double g : w.grad()) EXPECT_EQ(g, 0.0);
  EXPECT_EQ(opt.steps(), 1u);
}

TEST(Adam, DescendsAQuadratic) {
  Tensor w = Tensor::scalar(4.0, true);
  Adam opt({{"w", w}}, AdamConfig{0.05});
  for (int i = 0; i < 500; ++i) {
    mul(w, w).backward();
    opt.step();
  }
  EXPECT_LT(std::abs(w.item()), 0.05);
}

TEST(Adam, RejectsBadConfigAndMissingGradients) {
  Tensor w = Tensor::scalar(1.0, true);
  EXPECT_THROW(Adam({{"w", w}}, AdamConfig{0.0}), ConfigError);
  EXPECT_THROW(Adam({{"w", w}}, AdamConfig{0.1, 1.0}), ConfigError);
  Adam opt({{"c", Tensor::scalar(1.0)}}, AdamConfig{});
  EXPECT_THROW(opt.step(), ContractError);
}

TEST(Train, PatienceZeroOneEpoch) {
  const auto data = tiny_corpus();
  Model m(small(data.embed_dim));
  m.initialize(1);
  TrainConfig tc;
  tc.epochs = 1;
  tc.patience = 0;
  const TrainResult r = train(m, tc, data.train, data.dev);
  EXPECT_EQ(r.log.size(), 1u);
  EXPECT_EQ(r.best_epoch, 1u);
}

TEST(Train, DeterministicAndSelectsBestDev) {
  const auto data = tiny_corpus();
  TrainConfig tc;
  tc.epochs = 8;
  tc.batch_size = 2;
  tc.patience = 100;
  tc.adam.lr = 1e-2;
  Model a(small(data.embed_dim)), b(small(data.embed_dim));
  a.initialize(2);
  b.initialize(2);
  const TrainResult ra = train(a, tc, data.train, data.dev);
  const TrainResult rb = train(b, tc, data.train, data.dev);
  EXPECT_EQ(a.snapshot(), b.snapshot());
  ASSERT_EQ(ra.log.size(), rb.log.size());
  double best = 1e300;
  std::size_t best_epoch = 0;
  for (std::size_t i = 0; i < ra.log.size(); ++i) {
    EXPECT_EQ(ra.log[i].dev_mae, rb.log[i].dev_mae);
    if (ra.log[i].dev_mae < best) {
      best = ra.log[i].dev_mae;
      best_epoch = ra.log[i].epoch;
    }
  }
  EXPECT_EQ(ra.best_epoch, best_epoch);
  EXPECT_EQ(ra.best_dev_mae, best);
  // Restored parameters reproduce the best dev score.
  EXPECT_DOUBLE_EQ(evaluate(a, data.dev).mae, best);
}

TEST(Train, EarlyStoppingHonoursPatience) {
  const auto data = tiny_corpus();
  TrainConfig tc;
  tc.epochs = 50;
  tc.patience = 2;
  tc.adam.lr = 1.0;  // far too large, so dev MAE stops improving quickly
  Model m(small(data.embed_dim));
  m.initialize(3);
  const TrainResult r = train(m, tc, data.train, data.dev);
  EXPECT_LT(r.log.size(), 50u);
  EXPECT_EQ(r.log.size(), r.best_epoch + 2);
}

TEST(Train, OneStepReducesLossOnItsBatch) {
  const auto data = tiny_corpus();
  Model m(small(data.embed_dim));
  m.initialize(4);
  const PreparedInstance& inst = data.train[0];
  const double before = instance_loss(m, inst, 1.0).item();
  Adam opt(m.parameters(), AdamConfig{1e-3});
  instance_loss(m, inst, 1.0).backward();
  opt.step();
  EXPECT_LT(instance_loss(m, inst, 1.0).item(), before);
}

TEST(Train, EmptySplitsAreRejected) {
  const auto data = tiny_corpus();
  Model m(small(data.embed_dim));
  m.initialize(1);
  EXPECT_THROW(train(m, TrainConfig{}, {}, data.dev), ConfigError);
  EXPECT_THROW(train(m, TrainConfig{}, data.train, {}), ConfigError);
  TrainConfig bad;
  bad.batch_size = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Evaluate, ReportAndClipping) {
  const auto data = tiny_corpus();
  Model m(small(data.embed_dim));
  m.initialize(1);
  m.head.b_out.mutable_values()[0] = 10.0;
  const EvalReport raw = evaluate(m, data.test);
  const EvalReport clipped = evaluate(m, data.test, true);
  EXPECT_EQ(raw.n, data.test.size());
  for (const auto& p : clipped.per_instance) EXPECT_LE(p.pred, 3.0);
  EXPECT_LT(clipped.mae, raw.mae);
  EXPECT_THROW(evaluate(m, {}), ContractError);
}

TEST(Format, LogAndPredictionLines) {
  std::ostringstream os;
  write_epoch_line(os, {3, 0.25, 1.5, std::nullopt});
  EXPECT_EQ(os.str(), "3\t0.25\t1.5\tNA\n");
  EXPECT_EQ(format_r(0.5), "0.5");
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
}

}  // namespace
}  // namespace efp
