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

#ifndef EFP_GRAD_CHECK_H_
#define EFP_GRAD_CHECK_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "efp/tensor.h"

namespace efp {

struct ParamGradCheck {
  std::string name;
  double max_rel_error = 0.0;
  double max_abs_analytic = 0.0;
  double max_abs_numeric = 0.0;
  std::size_t one_sided = 0;  // coordinates judged by a one-sided difference
};

struct GradCheckReport {
  // max over coordinates of |analytic - numeric| / max(1, |numeric|)
  double max_rel_error = 0.0;
  std::vector<ParamGradCheck> params;
  std::size_t one_sided = 0;
};

// Compares backward() against central differences for every coordinate of
// every parameter. `loss` must rebuild the graph from the current parameter
// values each time it is called. `names` may be empty.
//
// With `one_sided_fallback`, a coordinate whose analytic value agrees better
// with the forward or backward difference than with the central one is
// scored against that one-sided estimate. This tolerates piecewise-linear
// activations whose kink falls inside [x - epsilon, x + epsilon]; the
// one-sided estimates are still independent of backward().
GradCheckReport grad_check(const std::function<Tensor()>& loss,
                           std::span<Tensor> params, double epsilon,
                           std::span<const std::string> names = {},
                           bool one_sided_fallback = false);

// Convenience wrapper returning only the maximum relative error.
double max_grad_error(const std::function<Tensor()>& loss,
                      std::span<Tensor> params, double epsilon);

}  // namespace efp

#endif  // EFP_GRAD_CHECK_H_
