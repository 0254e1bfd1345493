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

#include "efp/synth.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "efp/config.h"
#include "efp/errors.h"
#include "efp/rng.h"

namespace efp {
namespace {

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

CueRule parse_cue(const std::string& value) {
  const auto f = split_ws(value);
  if (f.size() != 4) {
    throw ConfigError("cue: expected '<word> <shift|flip> <value> <rate>', got '" +
                      value + "'");
  }
  CueRule cue;
  cue.word = f[0];
  if (f[1] == "shift") {
    cue.kind = CueRule::Kind::kShift;
  } else if (f[1] == "flip") {
    cue.kind = CueRule::Kind::kFlip;
  } else {
    throw ConfigError("cue '" + f[0] + "': unknown kind '" + f[1] + "'");
  }
  cue.shift = parse_real_value("cue value", f[2]);
  cue.rate = parse_real_value("cue rate", f[3]);
  return cue;
}

// Builder for one sentence; heads are filled in after all tokens exist.
struct Draft {
  std::vector<std::string> forms;
  std::vector<std::optional<std::size_t>> heads;
  std::vector<std::string> deprels;

  std::size_t push(std::string form, std::string deprel) {
    forms.push_back(std::move(form));
    heads.emplace_back();
    deprels.push_back(std::move(deprel));
    return forms.size() - 1;
  }
};

}  // namespace

std::string placement_name(CuePlacement p) {
  return p == CuePlacement::kTreeAdjacentSequenceFar
             ? "adjacent-in-tree-far-in-sequence"
             : "adjacent-in-sequence";
}

void SynthSpec::validate() const {
  if (n_sentences() == 0) throw ConfigError("synth: no sentences requested");
  if (min_length == 0 || min_length > max_length) {
    throw ConfigError("synth: need 0 < min_length <= max_length");
  }
  if (!(base_score >= kMinScore && base_score <= kMaxScore)) {
    throw ConfigError("synth: base_score outside [-3, 3]");
  }
  if (!(distractor_rate >= 0.0 && distractor_rate <= 1.0)) {
    throw ConfigError("synth: distractor_rate outside [0, 1]");
  }
  if (!(embedding_spread >= 0.0)) {
    throw ConfigError("synth: embedding_spread must be non-negative");
  }
  if (embed_dim == 0 || filler_vocab == 0 || verb_vocab == 0) {
    throw ConfigError("synth: embed_dim and vocabulary sizes must be positive");
  }
  std::set<std::string> words;
  for (const auto& c : cues) {
    if (c.word.empty()) throw ConfigError("synth: empty cue word");
    if (!words.insert(c.word).second) {
      throw ConfigError("synth: cue '" + c.word + "' listed twice");
    }
    if (!(c.rate >= 0.0 && c.rate <= 1.0)) {
      throw ConfigError("synth: rate of cue '" + c.word + "' outside [0, 1]");
    }
    if ((c.word[0] == 'n' || c.word[0] == 'v') && c.word.size() > 1 &&
        std::all_of(c.word.begin() + 1, c.word.end(),
                    [](char ch) { return ch >= '0' && ch <= '9'; })) {
      throw ConfigError("synth: cue '" + c.word + "' collides with filler names");
    }
  }
}

std::vector<CueRule> default_cues() {
  return {{"not", CueRule::Kind::kFlip, 0.0, 0.5},
          {"will", CueRule::Kind::kShift, -2.0, 0.5}};
}

double planted_score(double base, const std::vector<const CueRule*>& planted) {
  double score = base;
  bool flip = false;
  for (const auto* c : planted) {
    if (c->kind == CueRule::Kind::kShift) {
      score += c->shift;
    } else {
      flip = !flip;
    }
  }
  if (flip) score = -score;
  return std::clamp(score, kMinScore, kMaxScore);
}

SynthSpec parse_synth_spec(std::string_view text) {
  SynthSpec spec;
  for (const auto& [k, v] : parse_key_values(text)) {
    auto size = [&](const std::string& key) {
      const long long x = parse_int_value(key, v);
      if (x < 0) throw ConfigError(key + " must be non-negative");
      return static_cast<std::size_t>(x);
    };
    if (k == "n_train") {
      spec.n_train = size(k);
    } else if (k == "n_dev") {
      spec.n_dev = size(k);
    } else if (k == "n_test") {
      spec.n_test = size(k);
    } else if (k == "min_length") {
      spec.min_length = size(k);
    } else if (k == "max_length") {
      spec.max_length = size(k);
    } else if (k == "base_score") {
      spec.base_score = parse_real_value(k, v);
    } else if (k == "cue") {
      spec.cues.push_back(parse_cue(v));
    } else if (k == "placement") {
      if (v == "adjacent-in-tree-far-in-sequence") {
        spec.placement = CuePlacement::kTreeAdjacentSequenceFar;
      } else if (v == "adjacent-in-sequence") {
        spec.placement = CuePlacement::kSequenceAdjacent;
      } else {
        throw ConfigError("unknown placement '" + v + "'");
      }
    } else if (k == "distractor_rate") {
      spec.distractor_rate = parse_real_value(k, v);
    } else if (k == "embedding_spread") {
      spec.embedding_spread = parse_real_value(k, v);
    } else if (k == "embed_dim") {
      spec.embed_dim = size(k);
    } else if (k == "filler_vocab") {
      spec.filler_vocab = size(k);
    } else if (k == "verb_vocab") {
      spec.verb_vocab = size(k);
    } else if (k == "seed") {
      spec.seed = size(k);
    } else {
      throw ConfigError("unknown synth key '" + k + "'");
    }
  }
  spec.validate();
  return spec;
}

SynthCorpus generate_synth(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  SynthCorpus out;

  std::vector<std::string> vocab;
  for (const auto& c : spec.cues) vocab.push_back(c.word);
  for (std::size_t i = 0; i < spec.verb_vocab; ++i) vocab.push_back("v" + std::to_string(i));
  for (std::size_t i = 0; i < spec.filler_vocab; ++i) vocab.push_back("n" + std::to_string(i));
  {
    // One centroid per cue word, one shared by all verbs, one shared by all
    // fillers; each vector is its centroid plus spread-scaled noise.
    auto draw = [&] {
      std::vector<double> v(spec.embed_dim);
      for (auto& x : v) x = rng.uniform(-1.0, 1.0);
      return v;
    };
    const std::vector<double> verb_centroid = draw();
    const std::vector<double> filler_centroid = draw();
    std::ostringstream emb;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      const std::vector<double> centroid =
          i < spec.cues.size() ? draw()
          : i < spec.cues.size() + spec.verb_vocab ? verb_centroid
                                                    : filler_centroid;
      emb << vocab[i];
      for (std::size_t d = 0; d < spec.embed_dim; ++d) {
        emb << ' ' << real(centroid[d] + spec.embedding_spread * rng.uniform(-1.0, 1.0));
      }
      emb << '\n';
    }
    out.embeddings_txt = emb.str();
  }

  auto filler = [&] { return "n" + std::to_string(rng.below(spec.filler_vocab)); };
  auto verb = [&] { return "v" + std::to_string(rng.below(spec.verb_vocab)); };

  std::ostringstream ann;
  std::ostringstream man;
  for (std::size_t s = 0; s < spec.n_sentences(); ++s) {
    char idbuf[32];
    std::snprintf(idbuf, sizeof idbuf, "syn-%04zu", s);
    const std::string id = idbuf;

    std::vector<const CueRule*> planted;
    for (const auto& c : spec.cues) {
      if (rng.bernoulli(c.rate)) planted.push_back(&c);
    }
    // A cue that is not planted may still occur, attached elsewhere. At
    // rate 1 every cue word occurs exactly once, so the words alone say
    // nothing about the score.
    std::vector<const CueRule*> distractors;
    for (const auto& c : spec.cues) {
      const bool is_planted = std::find(planted.begin(), planted.end(), &c) != planted.end();
      if (!is_planted && rng.bernoulli(spec.distractor_rate)) distractors.push_back(&c);
    }
    // The second clause is present whenever distractors are enabled, so its
    // presence does not reveal whether a cue was planted.
    const bool second_clause = !distractors.empty() || spec.distractor_rate > 0.0;

    const bool far = spec.placement == CuePlacement::kTreeAdjacentSequenceFar;
    const std::size_t min_pre = far ? kMinCueDistance : 1;
    const std::size_t fixed =
        planted.size() + 2 + distractors.size() + (second_clause ? 1 : 0);
    const std::size_t length = std::max<std::size_t>(
        static_cast<std::size_t>(rng.between(static_cast<int>(spec.min_length),
                                             static_cast<int>(spec.max_length))),
        fixed + min_pre);
    const std::size_t spare = length - fixed - min_pre;
    const std::size_t pre = min_pre + rng.below(spare + 1);
    const std::size_t post = length - fixed - pre;

    Draft d;
    std::vector<std::size_t> cue_pos, pre_pos;
    std::vector<std::size_t> dcue_pos;
    std::optional<std::size_t> dverb;
    if (far) {
      // Cues, distractor cues and the optional fillers share the opening
      // region in random order, so only the tree tells them apart.
      enum class Slot { kCue, kDistractor, kFiller };
      std::vector<std::pair<Slot, const CueRule*>> opening;
      for (const auto* c : planted) opening.emplace_back(Slot::kCue, c);
      for (const auto* c : distractors) opening.emplace_back(Slot::kDistractor, c);
      for (std::size_t i = min_pre; i < pre; ++i) opening.emplace_back(Slot::kFiller, nullptr);
      rng.shuffle(std::span(opening));
      for (const auto& [slot, cue] : opening) {
        if (slot == Slot::kCue) {
          cue_pos.push_back(d.push(cue->word, "cue"));
        } else if (slot == Slot::kDistractor) {
          dcue_pos.push_back(d.push(cue->word, "cue"));
        } else {
          pre_pos.push_back(d.push(filler(), "dep"));
        }
      }
      for (std::size_t i = 0; i < min_pre; ++i) pre_pos.push_back(d.push(filler(), "dep"));
    } else {
      for (std::size_t i = 0; i < pre; ++i) pre_pos.push_back(d.push(filler(), "dep"));
      for (const auto* c : planted) cue_pos.push_back(d.push(c->word, "cue"));
    }
    const std::size_t anchor = d.push(verb(), "root");
    const std::size_t object = d.push(filler(), "obj");
    if (!far) {
      for (const auto* c : distractors) dcue_pos.push_back(d.push(c->word, "cue"));
    }
    if (second_clause) dverb = d.push(verb(), "acl");
    std::vector<std::size_t> post_pos;
    for (std::size_t i = 0; i < post; ++i) post_pos.push_back(d.push(filler(), "dep"));

    for (auto p : cue_pos) d.heads[p] = anchor;
    const std::size_t subject = pre_pos.back();
    d.heads[subject] = anchor;
    d.deprels[subject] = "nsubj";
    for (auto p : pre_pos) {
      if (p != subject) d.heads[p] = subject;
    }
    d.heads[object] = anchor;
    if (dverb) {
      d.heads[*dverb] = object;
      for (auto p : dcue_pos) d.heads[p] = *dverb;
    }
    const std::size_t post_head = dverb ? *dverb : object;
    for (auto p : post_pos) d.heads[p] = post_head;

    ParsedSentence sent;
    sent.id = id;
    for (std::size_t i = 0; i < d.forms.size(); ++i) {
      sent.tokens.push_back({i, d.forms[i], d.heads[i], d.deprels[i]});
    }
    validate_tree(id, sent.tokens);

    const double score = planted_score(spec.base_score, planted);
    out.annotations.push_back({id, anchor, score, s + 1});
    ann << id << '\t' << anchor << '\t' << real(score) << '\n';

    const Split split = s < spec.n_train                ? Split::kTrain
                        : s < spec.n_train + spec.n_dev ? Split::kDev
                                                        : Split::kTest;
    out.manifest[id] = split;
    man << id << '\t' << split_name(split) << '\n';
    out.sentences.push_back(std::move(sent));
  }

  out.conllu = serialize_conllu(out.sentences);
  out.annotations_tsv = ann.str();
  out.manifest_tsv = man.str();
  return out;
}

void write_synth(const SynthCorpus& corpus, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto write = [&](const char* name, const std::string& content) {
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write '" + path.string() + "'");
    os << content;
  };
  write("corpus.conllu", corpus.conllu);
  write("annotations.tsv", corpus.annotations_tsv);
  write("manifest.tsv", corpus.manifest_tsv);
  write("embeddings.txt", corpus.embeddings_txt);
}

}  // namespace efp
