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

#include "efp/grad_check.h"

#include <algorithm>
#include <cmath>

#include "efp/errors.h"

namespace efp {
namespace {

// Central errors below this are left alone; the fallback is for kinks.
constexpr double kFallbackFloor = 1e-6;

}  // namespace

GradCheckReport grad_check(const std::function<Tensor()>& loss,
                           std::span<Tensor> params, double epsilon,
                           std::span<const std::string> names,
                           bool one_sided_fallback) {
  if (!(epsilon > 0.0)) throw ContractError("grad_check: epsilon must be > 0");
  if (!names.empty() && names.size() != params.size()) {
    throw ContractError("grad_check: names and params differ in length");
  }

  for (auto& p : params) {
    if (!p.requires_grad()) {
      throw ContractError("grad_check: parameter does not require grad");
    }
    p.zero_grad();
  }
  Tensor base_loss = loss();
  base_loss.backward();
  const double base = base_loss.item();
  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (auto& p : params) {
    analytic.emplace_back(p.grad().begin(), p.grad().end());
  }

  GradCheckReport report;
  for (std::size_t k = 0; k < params.size(); ++k) {
    ParamGradCheck entry;
    entry.name = names.empty() ? "param" + std::to_string(k) : names[k];
    auto values = params[k].mutable_values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + epsilon;
      const double plus = loss().item();
      values[i] = saved - epsilon;
      const double minus = loss().item();
      values[i] = saved;
      const double numeric = (plus - minus) / (2.0 * epsilon);
      const double a = analytic[k][i];
      auto rel = [&](double n) { return std::abs(a - n) / std::max(1.0, std::abs(n)); };
      double err = rel(numeric);
      if (one_sided_fallback && err > kFallbackFloor) {
        // Near a ReLU kink the central difference averages two slopes while
        // the analytic gradient takes one of them.
        const double one_sided = std::min(rel((plus - base) / epsilon),
                                          rel((base - minus) / epsilon));
        if (one_sided < err) {
          err = one_sided;
          ++entry.one_sided;
        }
      }
      entry.max_rel_error = std::max(entry.max_rel_error, err);
      entry.max_abs_analytic = std::max(entry.max_abs_analytic, std::abs(a));
      entry.max_abs_numeric = std::max(entry.max_abs_numeric, std::abs(numeric));
    }
    report.max_rel_error = std::max(report.max_rel_error, entry.max_rel_error);
    report.one_sided += entry.one_sided;
    report.params.push_back(std::move(entry));
  }
  for (auto& p : params) p.zero_grad();
  return report;
}

double max_grad_error(const std::function<Tensor()>& loss,
                      std::span<Tensor> params, double epsilon) {
  return grad_check(loss, params, epsilon).max_rel_error;
}

}  // namespace efp
