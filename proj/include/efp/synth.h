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

// Synthetic cue corpora with planted factuality rules.
//
// Each sentence has one anchor verb at the root of its dependency tree.
// Cue words attached to the anchor change its score: shift cues add a
// constant, flip cues negate. A cue that is not planted may appear anyway as
// a distractor, attached to a second verb three arcs away from the anchor;
// it never affects the score.
//
// Tree-adjacent, sequence-far placement. The opening region holds the cues,
// the distractors and extra fillers in random order:
//
//   {cue* distractor* filler*} filler{6} ANCHOR object [dverb] filler*
//
// Sequence-adjacent placement:
//
//   filler+ cue* ANCHOR object [distractor+ dverb] filler*

#ifndef EFP_SYNTH_H_
#define EFP_SYNTH_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "efp/corpus.h"

namespace efp {

enum class CuePlacement { kTreeAdjacentSequenceFar, kSequenceAdjacent };

std::string placement_name(CuePlacement p);

struct CueRule {
  enum class Kind { kShift, kFlip };
  std::string word;
  Kind kind = Kind::kShift;
  double shift = 0.0;  // used by kShift
  double rate = 0.5;   // probability that a sentence carries this cue
};

struct SynthSpec {
  std::size_t n_train = 32;
  std::size_t n_dev = 16;
  std::size_t n_test = 16;
  std::size_t min_length = 10;
  std::size_t max_length = 16;
  double base_score = 3.0;
  std::vector<CueRule> cues;
  CuePlacement placement = CuePlacement::kTreeAdjacentSequenceFar;
  double distractor_rate = 0.0;  // per cue that is not planted
  std::size_t embed_dim = 16;
  // Word vectors are a class centroid plus uniform noise of this half-width.
  // Cue words each form their own class; verbs share one, fillers another.
  double embedding_spread = 1.0;
  std::size_t filler_vocab = 30;
  std::size_t verb_vocab = 10;
  std::uint64_t seed = 1;

  std::size_t n_sentences() const { return n_train + n_dev + n_test; }
  // Throws ConfigError.
  void validate() const;
};

// Minimum number of fillers between the last cue and the anchor under the
// sequence-far placement.
inline constexpr std::size_t kMinCueDistance = 6;

// key = value lines; "cue = <word> <shift|flip> <value> <rate>" repeats.
// The cue lexicon is exactly the listed cue lines (none listed: no cues).
SynthSpec parse_synth_spec(std::string_view text);

// "not" flips, "will" shifts by -2; each planted with probability 0.5.
std::vector<CueRule> default_cues();

// Score implied by the planted cues: base + sum(shifts), negated for an odd
// number of flips, clamped to [-3, 3].
double planted_score(double base, const std::vector<const CueRule*>& planted);

struct SynthCorpus {
  std::vector<ParsedSentence> sentences;
  std::vector<Annotation> annotations;
  Manifest manifest;
  std::string conllu;
  std::string annotations_tsv;
  std::string manifest_tsv;
  std::string embeddings_txt;
};

SynthCorpus generate_synth(const SynthSpec& spec);

// Writes corpus.conllu, annotations.tsv, manifest.tsv, embeddings.txt.
void write_synth(const SynthCorpus& corpus, const std::string& out_dir);

}  // namespace efp

#endif  // EFP_SYNTH_H_
