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

#include "efp/config.h"

#include <cctype>
#include <charconv>
#include <functional>
#include <sstream>

#include "efp/corpus.h"
#include "efp/errors.h"

namespace efp {
namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  const long long v = parse_int_value(key, value);
  if (v < 0) throw ConfigError(key + " must be non-negative, got " + value);
  return static_cast<std::size_t>(v);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"embed_dim", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.embed_dim = parse_size(k, v);
       }},
      {"hidden", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.hidden = parse_size(k, v);
       }},
      {"proj", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.proj = parse_size(k, v);
       }},
      {"gcn_features", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.gcn_features = parse_size(k, v);
       }},
      {"attention", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.attention = parse_size(k, v);
       }},
      {"regressor", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.regressor = parse_size(k, v);
       }},
      {"encoder_layers", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.encoder_layers = parse_size(k, v);
       }},
      {"gcn_layers", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.gcn_layers = parse_size(k, v);
       }},
      {"lambda", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.lambda = parse_real_value(k, v);
       }},
      {"no_structure", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.no_structure = parse_bool_value(k, v);
       }},
      {"no_attention", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.no_attention = parse_bool_value(k, v);
       }},
      {"row_normalize", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.row_normalize = parse_bool_value(k, v);
       }},
      {"affinity_bias_init", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.model.affinity_bias_init = parse_real_value(k, v);
       }},
      {"gcn_activation", [](RunConfig& c, const std::string&, const std::string& v) {
         c.model.gcn_activation = parse_activation(v);
       }},
      {"head_activation", [](RunConfig& c, const std::string&, const std::string& v) {
         c.model.head_activation = parse_activation(v);
       }},
      {"lr", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.adam.lr = parse_real_value(k, v);
       }},
      {"beta1", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.adam.beta1 = parse_real_value(k, v);
       }},
      {"beta2", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.adam.beta2 = parse_real_value(k, v);
       }},
      {"adam_epsilon", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.adam.epsilon = parse_real_value(k, v);
       }},
      {"epochs", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.epochs = parse_size(k, v);
       }},
      {"batch_size", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.batch_size = parse_size(k, v);
       }},
      {"patience", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.patience = parse_size(k, v);
       }},
      {"seed", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.seed = parse_size(k, v);
       }},
      {"huber_delta", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.huber_delta = parse_real_value(k, v);
       }},
      {"clip_predictions", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.clip_predictions = parse_bool_value(k, v);
       }},
  };
  return table;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_values(
    std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

double parse_real_value(const std::string& key, const std::string& value) {
  std::string_view s = value;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key + ": '" + value + "' is not a number");
  }
  return v;
}

long long parse_int_value(const std::string& key, const std::string& value) {
  std::string_view s = value;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key + ": '" + value + "' is not an integer");
  }
  return v;
}

bool parse_bool_value(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + ": '" + value + "' is not a boolean");
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  for (const auto& [key, value] : parse_key_values(text)) {
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(config, key, value);
  }
  if (!(config.model.lambda >= 0.0 && config.model.lambda <= 1.0)) {
    throw ConfigError("lambda " + format_real(config.model.lambda) +
                      " outside [0, 1]");
  }
  ModelConfig probe = config.model;
  if (probe.embed_dim == 0) probe.embed_dim = 1;
  probe.validate();
  config.train.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_file(path));
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "# model\n"
     << "embed_dim = " << c.model.embed_dim << '\n'
     << "hidden = " << c.model.hidden << '\n'
     << "proj = " << c.model.proj << '\n'
     << "gcn_features = " << c.model.gcn_features << '\n'
     << "attention = " << c.model.attention << '\n'
     << "regressor = " << c.model.regressor << '\n'
     << "encoder_layers = " << c.model.encoder_layers << '\n'
     << "gcn_layers = " << c.model.gcn_layers << '\n'
     << "lambda = " << format_real(c.model.lambda) << '\n'
     << "no_structure = " << b(c.model.no_structure) << '\n'
     << "no_attention = " << b(c.model.no_attention) << '\n'
     << "row_normalize = " << b(c.model.row_normalize) << '\n'
     << "affinity_bias_init = " << format_real(c.model.affinity_bias_init) << '\n'
     << "gcn_activation = " << activation_name(c.model.gcn_activation) << '\n'
     << "head_activation = " << activation_name(c.model.head_activation) << '\n'
     << "# training\n"
     << "lr = " << format_real(c.train.adam.lr) << '\n'
     << "beta1 = " << format_real(c.train.adam.beta1) << '\n'
     << "beta2 = " << format_real(c.train.adam.beta2) << '\n'
     << "adam_epsilon = " << format_real(c.train.adam.epsilon) << '\n'
     << "epochs = " << c.train.epochs << '\n'
     << "batch_size = " << c.train.batch_size << '\n'
     << "patience = " << c.train.patience << '\n'
     << "seed = " << c.train.seed << '\n'
     << "huber_delta = " << format_real(c.train.huber_delta) << '\n'
     << "clip_predictions = " << b(c.train.clip_predictions) << '\n';
  return os.str();
}

}  // namespace efp
