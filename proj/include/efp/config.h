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

// Flat "key = value" run configuration.
//
//   # comment
//   hidden = 16
//   lambda = 0.6
//   no_attention = false
//
// Every key is typed; unknown keys and malformed values are ConfigErrors.
// Keys that are absent keep the defaults of ModelConfig / TrainConfig.
// See README.md for the full key list.

#ifndef EFP_CONFIG_H_
#define EFP_CONFIG_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "efp/model.h"
#include "efp/trainer.h"

namespace efp {

struct RunConfig {
  ModelConfig model;
  TrainConfig train;
};

// Splits "key = value" lines; repeated keys keep every value in order.
std::vector<std::pair<std::string, std::string>> parse_key_values(
    std::string_view text);

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
// Writes every key, so the output alone reproduces the run.
std::string serialize_config(const RunConfig& config);

// Shared value parsers, also used by the synthetic corpus spec.
double parse_real_value(const std::string& key, const std::string& value);
long long parse_int_value(const std::string& key, const std::string& value);
bool parse_bool_value(const std::string& key, const std::string& value);

}  // namespace efp

#endif  // EFP_CONFIG_H_
