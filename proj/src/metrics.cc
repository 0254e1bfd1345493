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

#include "efp/metrics.h"

#include <algorithm>
#include <cmath>

#include "efp/errors.h"

namespace efp {

double mae(std::span<const double> preds, std::span<const double> golds) {
  if (preds.size() != golds.size()) {
    throw ContractError("mae: " + std::to_string(preds.size()) +
                        " predictions vs " + std::to_string(golds.size()) +
                        " golds");
  }
  if (preds.empty()) throw ContractError("mae: empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    total += std::abs(preds[i] - golds[i]);
  }
  return total / static_cast<double>(preds.size());
}

std::optional<double> pearson(std::span<const double> preds,
                              std::span<const double> golds) {
  if (preds.size() != golds.size()) {
    throw ContractError("pearson: " + std::to_string(preds.size()) +
                        " predictions vs " + std::to_string(golds.size()) +
                        " golds");
  }
  if (preds.size() < 2) throw ContractError("pearson: needs at least 2 pairs");

  double mean_p = 0.0, mean_g = 0.0;
  double m2_p = 0.0, m2_g = 0.0, co = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    const double dp = preds[i] - mean_p;
    const double dg = golds[i] - mean_g;
    mean_p += dp / k;
    mean_g += dg / k;
    m2_p += dp * (preds[i] - mean_p);
    m2_g += dg * (golds[i] - mean_g);
    co += dp * (golds[i] - mean_g);
  }
  const double n = static_cast<double>(preds.size());
  const double sd_p = std::sqrt(m2_p / n);
  const double sd_g = std::sqrt(m2_g / n);
  if (sd_p < kMinStddev || sd_g < kMinStddev) return std::nullopt;
  const double r = co / std::sqrt(m2_p * m2_g);
  return std::clamp(r, -1.0, 1.0);
}

EvalReport make_report(std::vector<InstancePrediction> predictions) {
  if (predictions.empty()) throw ContractError("evaluation over no instances");
  std::vector<double> p, g;
  p.reserve(predictions.size());
  g.reserve(predictions.size());
  for (const auto& x : predictions) {
    p.push_back(x.pred);
    g.push_back(x.gold);
  }
  EvalReport report;
  report.mae = mae(p, g);
  if (p.size() >= 2) report.pearson_r = pearson(p, g);
  report.n = predictions.size();
  report.per_instance = std::move(predictions);
  return report;
}

}  // namespace efp
