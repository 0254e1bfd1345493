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

// Self-validation of the shipped fixture corpora.
//
// A fixture is a directory holding sentences.conllu, annotations.tsv,
// manifest.tsv and expect.cfg. expect.cfg declares what the files must
// contain:
//
//   sentences = 1              # number of parsed sentences
//   instances = 1              # number of annotated instances
//   syn_ones = treat-1 43         # 1-entries of A_syn for a sentence (repeatable)
//   edge = treat-1 will go        # dependent form, head form (repeatable)

#ifndef EFP_FIXTURES_H_
#define EFP_FIXTURES_H_

#include <string>
#include <vector>

namespace efp {

struct FixtureCheck {
  std::string name;
  bool passed = false;
  std::string detail;  // first failure, or a short summary
};

// Checks a single fixture directory.
FixtureCheck check_fixture(const std::string& dir);

// Checks every subdirectory of `root` that contains an expect.cfg, in
// lexicographic order.
std::vector<FixtureCheck> fixture_selfcheck(const std::string& root);

}  // namespace efp

#endif  // EFP_FIXTURES_H_
