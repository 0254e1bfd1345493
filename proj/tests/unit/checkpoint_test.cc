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


#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "efp/checkpoint.h"
#include "efp/cli.h"
#include "efp/errors.h"

namespace efp {
namespace {

ModelConfig small(std::size_t hidden = 3) {
  ModelConfig c;
  c.embed_dim = 4;
  c.hidden = hidden;
  c.proj = 4;
  c.gcn_features = 3;
  c.attention = 4;
  c.regressor = 3;
  return c;
}

std::string bytes_of(const Model& m) {
  std::ostringstream os;
  write_checkpoint(os, make_checkpoint(m));
  return os.str();
}

TEST(Checkpoint, RoundTripGivesIdenticalPredictions) {
  Model a(small());
  a.initialize(7);
  const auto path = std::filesystem::temp_directory_path() / "efp_ckpt_test.bin";
  save_checkpoint(path.string(), a);
  Model b(small());
  apply_checkpoint(load_checkpoint(path.string()), b);
  const PreparedInstance inst = gradcheck_sentence(4, 1);
  EXPECT_EQ(a.predict(inst), b.predict(inst));
  EXPECT_EQ(a.snapshot(), b.snapshot());
  std::filesystem::remove(path);
}

TEST(Checkpoint, StartsWithMagic) {
  Model a(small());
  EXPECT_EQ(bytes_of(a).substr(0, 8), std::string("EFPCKPT\0", 8));
}

TEST(Checkpoint, ShapeMismatchNamesBothShapes) {
  Model a(small(3));
  Model b(small(5));
  try {
    apply_checkpoint(make_checkpoint(a), b);
    FAIL();
  } catch (const DimensionError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("[3"), std::string::npos) << what;
    EXPECT_NE(what.find("[5"), std::string::npos) << what;
  }
}

TEST(Checkpoint, StructureAblationMismatch) {
  Model a(small());
  ModelConfig c = small();
  c.no_structure = true;
  Model b(c);
  EXPECT_THROW(apply_checkpoint(make_checkpoint(a), b), DimensionError);
}

TEST(Checkpoint, CorruptInputs) {
  Model a(small());
  const std::string good = bytes_of(a);
  std::string bad = good;
  bad[0] = 'X';
  std::istringstream magic(bad);
  EXPECT_THROW(read_checkpoint(magic), FormatError);
  std::istringstream truncated(good.substr(0, good.size() - 5));
  EXPECT_THROW(read_checkpoint(truncated), FormatError);
  std::istringstream trailing(good + "junk");
  EXPECT_THROW(read_checkpoint(trailing), FormatError);
  EXPECT_THROW(load_checkpoint("/nonexistent/model.ckpt"), Error);
}

}  // namespace
}  // namespace efp
