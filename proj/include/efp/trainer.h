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

#ifndef EFP_TRAINER_H_
#define EFP_TRAINER_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "efp/metrics.h"
#include "efp/model.h"
#include "efp/params.h"

namespace efp {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. Moments are keyed by position in the parameter
// list given at construction.
class Adam {
 public:
  Adam(ParamList params, AdamConfig config);

  // Applies one update from the accumulated gradients, then zeroes them.
  void step();

  std::uint64_t steps() const { return t_; }
  const AdamConfig& config() const { return config_; }
  const std::vector<std::vector<double>>& first_moment() const { return m_; }
  const std::vector<std::vector<double>>& second_moment() const { return v_; }

 private:
  ParamList params_;
  AdamConfig config_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::uint64_t t_ = 0;
};

struct TrainConfig {
  AdamConfig adam;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  std::size_t patience = 10;
  std::uint64_t seed = 1;
  double huber_delta = 1.0;
  bool clip_predictions = false;  // evaluation-time clip to [-3, 3]

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;  // mean Huber loss over the epoch
  double dev_mae = 0.0;
  std::optional<double> dev_r;
};

struct TrainResult {
  std::size_t best_epoch = 0;
  double best_dev_mae = 0.0;
  std::vector<EpochRecord> log;
};

// Loss for one instance, graph attached.
Tensor instance_loss(const Model& model, const PreparedInstance& inst,
                     double huber_delta);

// Runs the epoch loop and leaves `model` holding the best-dev parameters.
// The model must already be initialized.
TrainResult train(Model& model, const TrainConfig& config,
                  const std::vector<PreparedInstance>& train_set,
                  const std::vector<PreparedInstance>& dev_set);

EvalReport evaluate(const Model& model,
                    const std::vector<PreparedInstance>& instances,
                    bool clip_predictions = false);

// Renders a double so that logs are byte-stable ("%.17g").
std::string format_real(double v);
// Pearson r or "NA".
std::string format_r(const std::optional<double>& r);

// epoch<TAB>train_loss<TAB>dev_mae<TAB>dev_r
void write_epoch_line(std::ostream& os, const EpochRecord& rec);

// Per instance: sentence_id<TAB>anchor<TAB>gold<TAB>pred<TAB>a1,...,an
void write_predictions(std::ostream& os, const EvalReport& report);

}  // namespace efp

#endif  // EFP_TRAINER_H_
