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

#include "efp/fixtures.h"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "efp/config.h"
#include "efp/corpus.h"
#include "efp/errors.h"
#include "efp/structure.h"

namespace efp {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

const ParsedSentence& find_sentence(const std::vector<ParsedSentence>& sents,
                                    const std::string& id) {
  for (const auto& s : sents) {
    if (s.id == id) return s;
  }
  throw AlignmentError("expect.cfg names unknown sentence '" + id + "'");
}

std::size_t count_ones(const Tensor& m) {
  const auto v = m.values();
  return static_cast<std::size_t>(std::count(v.begin(), v.end(), 1.0));
}

}  // namespace

FixtureCheck check_fixture(const std::string& dir) {
  FixtureCheck check;
  check.name = fs::path(dir).filename().string();
  try {
    const fs::path root(dir);
    Dataset ds;
    ds.sentences = parse_conllu(read_file((root / "sentences.conllu").string()));
    ds.annotations = parse_annotations(read_file((root / "annotations.tsv").string()));
    ds.manifest = parse_manifest(read_file((root / "manifest.tsv").string()));
    const DatasetSplit split = join_and_split(std::span<const Dataset>(&ds, 1));
    const std::size_t instances =
        split.train.size() + split.dev.size() + split.test.size();

    // Structural invariant that holds for every valid tree.
    for (const auto& s : ds.sentences) {
      const std::size_t n = s.tokens.size();
      const std::size_t ones = count_ones(syntactic_adjacency(s.tokens, s.id));
      if (ones != n + 2 * (n - 1)) {
        throw Error("sentence '" + s.id + "': A_syn has " + std::to_string(ones) +
                    " ones, expected " + std::to_string(n + 2 * (n - 1)));
      }
    }

    std::size_t checks = 0;
    for (const auto& [key, value] :
         parse_key_values(read_file((root / "expect.cfg").string()))) {
      const auto w = words(value);
      if (key == "sentences") {
        const auto want = static_cast<std::size_t>(parse_int_value(key, value));
        if (ds.sentences.size() != want) {
          throw Error("expected " + value + " sentences, found " +
                      std::to_string(ds.sentences.size()));
        }
      } else if (key == "instances") {
        const auto want = static_cast<std::size_t>(parse_int_value(key, value));
        if (instances != want) {
          throw Error("expected " + value + " instances, found " +
                      std::to_string(instances));
        }
      } else if (key == "syn_ones" && w.size() == 2) {
        const auto& s = find_sentence(ds.sentences, w[0]);
        const std::size_t ones = count_ones(syntactic_adjacency(s.tokens, s.id));
        if (std::to_string(ones) != w[1]) {
          throw Error("sentence '" + w[0] + "': A_syn has " +
                      std::to_string(ones) + " ones, declared " + w[1]);
        }
      } else if (key == "edge" && w.size() == 3) {
        const auto& s = find_sentence(ds.sentences, w[0]);
        const bool found = std::any_of(
            s.tokens.begin(), s.tokens.end(), [&](const Token& t) {
              return t.form == w[1] && t.head && s.tokens[*t.head].form == w[2];
            });
        if (!found) {
          throw Error("sentence '" + w[0] + "': no edge " + w[2] + " -> " + w[1]);
        }
      } else {
        throw ConfigError("expect.cfg: bad entry '" + key + " = " + value + "'");
      }
      ++checks;
    }
    check.passed = true;
    check.detail = std::to_string(ds.sentences.size()) + " sentences, " +
                   std::to_string(instances) + " instances, " +
                   std::to_string(checks) + " declared checks";
  } catch (const std::exception& e) {
    check.passed = false;
    check.detail = e.what();
  }
  return check;
}

std::vector<FixtureCheck> fixture_selfcheck(const std::string& root) {
  std::vector<std::string> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "expect.cfg")) {
      dirs.push_back(entry.path().string());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<FixtureCheck> out;
  for (const auto& d : dirs) out.push_back(check_fixture(d));
  return out;
}

}  // namespace efp
