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

#include "efp/corpus.h"

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "efp/errors.h"

namespace efp {
namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  // A trailing newline does not start another line.
  if (!lines.empty() && lines.back().empty() && !text.empty() &&
      text.back() == '\n') {
    lines.pop_back();
  }
  return lines;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = s.find(sep, start);
    if (end == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

std::optional<long long> to_int(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

std::optional<double> to_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string split_name(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kDev:
      return "dev";
    case Split::kTest:
      return "test";
  }
  return "?";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  throw ParseError("unknown split '" + std::string(name) + "'", 0);
}

const std::vector<SentenceInstance>& DatasetSplit::get(Split split) const {
  switch (split) {
    case Split::kTrain:
      return train;
    case Split::kDev:
      return dev;
    case Split::kTest:
      return test;
  }
  return test;
}

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim), unk_(dim, 0.0) {
  if (dim == 0) throw FormatError("embedding dimension must be positive");
}

bool EmbeddingTable::contains(const std::string& form) const {
  return entries_.count(form) > 0;
}

void EmbeddingTable::add(std::string form, std::vector<double> vec) {
  if (vec.size() != dim_) {
    throw FormatError("embedding for '" + form + "' has " +
                      std::to_string(vec.size()) + " values, expected " +
                      std::to_string(dim_));
  }
  entries_[std::move(form)] = std::move(vec);
}

const std::vector<double>& EmbeddingTable::lookup(const std::string& form) const {
  if (auto it = entries_.find(form); it != entries_.end()) return it->second;
  if (auto it = entries_.find(lowercase(form)); it != entries_.end()) {
    return it->second;
  }
  return unk_;
}

void validate_tree(const std::string& sentence_id, std::span<const Token> tokens) {
  const std::size_t n = tokens.size();
  if (n == 0) throw TreeError(sentence_id, "sentence has no tokens");
  std::size_t roots = 0;
  for (const auto& t : tokens) {
    if (!t.head) {
      ++roots;
    } else if (*t.head >= n) {
      throw TreeError(sentence_id, "token " + std::to_string(t.index) +
                                       " has head " + std::to_string(*t.head) +
                                       " beyond sentence length " +
                                       std::to_string(n));
    } else if (*t.head == t.index) {
      throw TreeError(sentence_id, "token " + std::to_string(t.index) +
                                       " is its own head");
    }
  }
  if (roots == 0) throw TreeError(sentence_id, "no root token");
  if (roots > 1) {
    throw TreeError(sentence_id, std::to_string(roots) + " root tokens");
  }
  // 0 = unvisited, 1 = on current path, 2 = reaches root.
  std::vector<int> state(n, 0);
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<std::size_t> path;
    std::size_t cur = start;
    while (true) {
      if (state[cur] == 2) break;
      if (state[cur] == 1) {
        throw TreeError(sentence_id,
                        "cycle through token " + std::to_string(cur));
      }
      state[cur] = 1;
      path.push_back(cur);
      if (!tokens[cur].head) break;
      cur = *tokens[cur].head;
    }
    for (auto p : path) state[p] = 2;
  }
}

std::vector<ParsedSentence> parse_conllu(std::string_view text) {
  std::vector<ParsedSentence> out;
  ParsedSentence cur;
  std::string pending_id;
  std::size_t ordinal = 0;

  auto flush = [&]() {
    if (cur.tokens.empty()) {
      pending_id.clear();
      return;
    }
    ++ordinal;
    cur.id = pending_id.empty() ? "sent-" + std::to_string(ordinal) : pending_id;
    validate_tree(cur.id, cur.tokens);
    out.push_back(std::move(cur));
    cur = ParsedSentence{};
    pending_id.clear();
  };

  // Heads are kept 1-based (0 = root) until the sentence is complete so that
  // out-of-range heads are reported as tree errors rather than parse errors.
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = lines[ln];
    const std::size_t lineno = ln + 1;
    if (is_blank(line)) {
      flush();
      continue;
    }
    if (line.front() == '#') {
      std::string_view body = trim(line.substr(1));
      if (body.starts_with("sent_id")) {
        body.remove_prefix(7);
        body = trim(body);
        if (!body.empty() && body.front() == '=') {
          pending_id = std::string(trim(body.substr(1)));
        }
      }
      continue;
    }
    const auto cols = split_on(line, '\t');
    if (cols.size() != 10) {
      throw ParseError("expected 10 tab-separated columns, got " +
                           std::to_string(cols.size()),
                       lineno);
    }
    if (cols[0].find('-') != std::string_view::npos ||
        cols[0].find('.') != std::string_view::npos) {
      continue;
    }
    const auto id = to_int(cols[0]);
    if (!id || *id != static_cast<long long>(cur.tokens.size()) + 1) {
      throw ParseError("token ID '" + std::string(cols[0]) + "' out of sequence",
                       lineno);
    }
    const auto head = to_int(cols[6]);
    if (!head || *head < 0) {
      throw ParseError("HEAD '" + std::string(cols[6]) + "' is not a non-negative integer",
                       lineno);
    }
    Token tok;
    tok.index = cur.tokens.size();
    tok.form = std::string(cols[1]);
    if (*head > 0) tok.head = static_cast<std::size_t>(*head - 1);
    tok.deprel = std::string(cols[7]);
    cur.tokens.push_back(std::move(tok));
  }
  flush();
  return out;
}

std::string serialize_conllu(std::span<const ParsedSentence> sentences) {
  std::ostringstream os;
  for (const auto& s : sentences) {
    os << "# sent_id = " << s.id << '\n';
    for (const auto& t : s.tokens) {
      os << t.index + 1 << '\t' << t.form << "\t_\t_\t_\t_\t"
         << (t.head ? *t.head + 1 : 0) << '\t'
         << (t.deprel.empty() ? "_" : t.deprel) << "\t_\t_\n";
    }
    os << '\n';
  }
  return os.str();
}

std::vector<Annotation> parse_annotations(std::string_view text) {
  std::vector<Annotation> out;
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = lines[ln];
    const std::size_t lineno = ln + 1;
    if (is_blank(line) || line.front() == '#') continue;
    const auto cols = split_on(line, '\t');
    if (cols.size() != 3) {
      throw ParseError("expected sentence_id<TAB>anchor<TAB>score", lineno);
    }
    const auto anchor = to_int(trim(cols[1]));
    if (!anchor || *anchor < 0) {
      throw ParseError("anchor index '" + std::string(cols[1]) +
                           "' is not a non-negative integer",
                       lineno);
    }
    const auto score = to_double(trim(cols[2]));
    if (!score) {
      throw ParseError("score '" + std::string(cols[2]) + "' is not a number",
                       lineno);
    }
    if (!(*score >= kMinScore && *score <= kMaxScore)) {
      throw RangeError("line " + std::to_string(lineno) + ": score " +
                       std::string(cols[2]) + " outside [-3, +3]");
    }
    out.push_back({std::string(trim(cols[0])),
                   static_cast<std::size_t>(*anchor), *score, lineno});
  }
  return out;
}

Manifest parse_manifest(std::string_view text) {
  Manifest out;
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = lines[ln];
    const std::size_t lineno = ln + 1;
    if (is_blank(line) || line.front() == '#') continue;
    const auto cols = split_on(line, '\t');
    if (cols.size() != 2) {
      throw ParseError("expected sentence_id<TAB>split", lineno);
    }
    Split split;
    try {
      split = parse_split(trim(cols[1]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    std::string id(trim(cols[0]));
    if (!out.emplace(id, split).second) {
      throw ParseError("sentence '" + id + "' listed twice", lineno);
    }
  }
  return out;
}

EmbeddingTable load_embeddings(std::istream& in,
                               std::optional<std::size_t> expected_dim) {
  std::optional<EmbeddingTable> table;
  if (expected_dim) table.emplace(*expected_dim);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    auto fields = split_on(line, ' ');
    std::erase_if(fields, [](std::string_view f) { return f.empty(); });
    if (fields.size() < 2) {
      throw FormatError("line " + std::to_string(lineno) +
                        ": expected a token followed by values");
    }
    const std::size_t dim = fields.size() - 1;
    if (!table) table.emplace(dim);
    if (dim != table->dim()) {
      throw FormatError("line " + std::to_string(lineno) + ": " +
                        std::to_string(dim) + " values, expected " +
                        std::to_string(table->dim()));
    }
    std::vector<double> vec(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const auto v = to_double(fields[i + 1]);
      if (!v) {
        throw FormatError("line " + std::to_string(lineno) + ": bad value '" +
                          std::string(fields[i + 1]) + "'");
      }
      vec[i] = *v;
    }
    table->add(std::string(fields[0]), std::move(vec));
  }
  if (!table) throw FormatError("embedding file is empty");
  return std::move(*table);
}

DatasetSplit join_and_split(std::span<const Dataset> datasets) {
  DatasetSplit out;
  for (const auto& ds : datasets) {
    std::map<std::string, const ParsedSentence*> by_id;
    for (const auto& s : ds.sentences) {
      if (!by_id.emplace(s.id, &s).second) {
        throw AlignmentError("duplicate sentence id '" + s.id + "'");
      }
    }
    for (const auto& [id, split] : ds.manifest) {
      if (!by_id.count(id)) {
        throw AlignmentError("manifest names unknown sentence '" + id + "'");
      }
    }
    std::set<std::pair<std::string, std::size_t>> seen;
    for (const auto& a : ds.annotations) {
      auto it = by_id.find(a.sentence_id);
      if (it == by_id.end()) {
        throw AlignmentError("annotation line " + std::to_string(a.line) +
                             " references unknown sentence '" + a.sentence_id +
                             "'");
      }
      const auto& tokens = it->second->tokens;
      if (a.anchor_index >= tokens.size()) {
        throw AlignmentError("annotation line " + std::to_string(a.line) +
                             ": anchor " + std::to_string(a.anchor_index) +
                             " out of bounds for sentence '" + a.sentence_id +
                             "' of length " + std::to_string(tokens.size()));
      }
      if (!seen.emplace(a.sentence_id, a.anchor_index).second) {
        throw AlignmentError("annotation line " + std::to_string(a.line) +
                             ": anchor " + std::to_string(a.anchor_index) +
                             " of sentence '" + a.sentence_id +
                             "' annotated twice");
      }
      auto m = ds.manifest.find(a.sentence_id);
      if (m == ds.manifest.end()) {
        throw AlignmentError("sentence '" + a.sentence_id +
                             "' is not assigned to a split");
      }
      SentenceInstance inst{a.sentence_id, tokens, a.anchor_index, a.score};
      switch (m->second) {
        case Split::kTrain:
          out.train.push_back(std::move(inst));
          break;
        case Split::kDev:
          out.dev.push_back(std::move(inst));
          break;
        case Split::kTest:
          out.test.push_back(std::move(inst));
          break;
      }
    }
  }
  return out;
}

std::string read_file(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw Error("file not found: '" + path + "'");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace efp
