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

// Readers for dependency parses (CoNLL-U), factuality annotations, split
// manifests and static word embeddings.
//
// All readers validate eagerly and throw typed errors from efp/errors.h;
// anything returned from here satisfies the invariants documented on the
// types below.

#ifndef EFP_CORPUS_H_
#define EFP_CORPUS_H_

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace efp {

inline constexpr double kMinScore = -3.0;
inline constexpr double kMaxScore = 3.0;

struct Token {
  std::size_t index = 0;  // 0-based position
  std::string form;
  std::optional<std::size_t> head;  // nullopt for the root
  std::string deprel;               // carried along, not used by the model
};

struct ParsedSentence {
  std::string id;
  std::vector<Token> tokens;
};

// One scored event mention. A sentence with several annotated anchors yields
// several instances sharing the same tokens.
struct SentenceInstance {
  std::string sentence_id;
  std::vector<Token> tokens;
  std::size_t anchor_index = 0;
  double gold_score = 0.0;
};

struct Annotation {
  std::string sentence_id;
  std::size_t anchor_index = 0;
  double score = 0.0;
  std::size_t line = 0;  // source line, for diagnostics
};

enum class Split { kTrain, kDev, kTest };

std::string split_name(Split split);
Split parse_split(std::string_view name);

// sentence_id -> split
using Manifest = std::map<std::string, Split>;

struct DatasetSplit {
  std::vector<SentenceInstance> train;
  std::vector<SentenceInstance> dev;
  std::vector<SentenceInstance> test;

  const std::vector<SentenceInstance>& get(Split split) const;
};

// Raw inputs of one corpus; join_and_split() materializes them.
struct Dataset {
  std::vector<ParsedSentence> sentences;
  std::vector<Annotation> annotations;
  Manifest manifest;
};

class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(const std::string& form) const;
  void add(std::string form, std::vector<double> vec);

  // Exact match, then ASCII-lowercased match, then the zero unk vector.
  const std::vector<double>& lookup(const std::string& form) const;
  const std::vector<double>& unk() const { return unk_; }

 private:
  std::size_t dim_;
  std::unordered_map<std::string, std::vector<double>> entries_;
  std::vector<double> unk_;
};

// Checks that heads form a single-rooted tree. Throws TreeError.
void validate_tree(const std::string& sentence_id, std::span<const Token> tokens);

// 10-column CoNLL-U. Sentence ids come from "# sent_id = ..." comments, or
// "sent-<ordinal>" when absent. Multiword and empty-node lines are skipped.
std::vector<ParsedSentence> parse_conllu(std::string_view text);
std::string serialize_conllu(std::span<const ParsedSentence> sentences);

// sentence_id<TAB>anchor_index<TAB>score per line.
std::vector<Annotation> parse_annotations(std::string_view text);

// sentence_id<TAB>{train|dev|test} per line.
Manifest parse_manifest(std::string_view text);

// "token v1 ... vD" per line. The dimension is taken from the first entry
// when `expected_dim` is not given.
EmbeddingTable load_embeddings(std::istream& in,
                               std::optional<std::size_t> expected_dim = {});

// Joins parses with annotations and distributes instances by manifest.
// Several datasets are concatenated in order.
DatasetSplit join_and_split(std::span<const Dataset> datasets);

// Reads a whole file; throws efp::Error naming the path on failure.
std::string read_file(const std::string& path);

}  // namespace efp

#endif  // EFP_CORPUS_H_
