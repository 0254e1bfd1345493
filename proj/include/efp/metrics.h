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

#ifndef EFP_METRICS_H_
#define EFP_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace efp {

// Pearson r is reported as undefined when either side's standard deviation
// falls below this.
inline constexpr double kMinStddev = 1e-12;

// Mean absolute error. Throws ContractError on empty or mismatched input.
double mae(std::span<const double> preds, std::span<const double> golds);

// Pearson correlation with single-pass (Welford) co-moment accumulation.
// nullopt when either vector is constant. Needs at least two pairs.
std::optional<double> pearson(std::span<const double> preds,
                              std::span<const double> golds);

struct InstancePrediction {
  std::string sentence_id;
  std::size_t anchor_index = 0;
  double gold = 0.0;
  double pred = 0.0;
  std::vector<double> attention;
};

struct EvalReport {
  double mae = 0.0;
  std::optional<double> pearson_r;
  std::size_t n = 0;
  std::vector<InstancePrediction> per_instance;
};

// Metrics over the collected predictions. Pearson is undefined for n < 2.
EvalReport make_report(std::vector<InstancePrediction> predictions);

}  // namespace efp

#endif  // EFP_METRICS_H_
