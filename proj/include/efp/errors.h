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

#ifndef EFP_ERRORS_H_
#define EFP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace efp {

// Root of every error the library throws. The CLI maps all of these to exit
// code 2 (input/config error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes are incompatible.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An operation received an input outside its mathematical domain (for
// example an empty sequence).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A caller broke an API precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Dependency heads do not form a single-rooted tree.
class TreeError : public Error {
 public:
  TreeError(const std::string& sentence_id, const std::string& what)
      : Error("sentence '" + sentence_id + "': " + what),
        sentence_id_(sentence_id) {}
  const std::string& sentence_id() const { return sentence_id_; }

 private:
  std::string sentence_id_;
};

// A numeric value lies outside its permitted range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Annotations, parses and manifests disagree with each other.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

// Structured file (embeddings, checkpoint) has an inconsistent layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace efp

#endif  // EFP_ERRORS_H_
