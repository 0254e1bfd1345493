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

#ifndef EFP_CLI_H_
#define EFP_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "efp/grad_check.h"
#include "efp/model.h"

namespace efp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitInputError = 2;

// Entry point of the efp command line tool. `args` excludes the program
// name. Never throws; errors become exit codes plus a diagnostic on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

// The built-in four-token sentence "She will not go" (anchor "go").
PreparedInstance gradcheck_sentence(std::size_t embed_dim, std::uint64_t seed);

struct GradcheckOutcome {
  GradCheckReport report;
  std::size_t num_scalars = 0;
};

// Gradient check of every parameter of a seeded model built from `config`
// on the built-in sentence. embed_dim 0 means 4.
GradcheckOutcome gradcheck_model(const ModelConfig& config, std::uint64_t seed,
                                 double epsilon = 1e-5);

// Same with every dimension capped at 8.
ModelConfig tiny_config(const ModelConfig& base);

}  // namespace efp

#endif  // EFP_CLI_H_
