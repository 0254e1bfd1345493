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

#include "efp/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "efp/errors.h"
#include "efp/head.h"
#include "efp/rng.h"

namespace efp {

Adam::Adam(ParamList params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  if (!(config_.lr > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(config_.beta1 >= 0.0 && config_.beta1 < 1.0) ||
      !(config_.beta2 >= 0.0 && config_.beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in [0, 1)");
  }
  if (!(config_.epsilon > 0.0)) throw ConfigError("Adam epsilon must be positive");
  for (const auto& p : params_) {
    m_.emplace_back(p.tensor.numel(), 0.0);
    v_.emplace_back(p.tensor.numel(), 0.0);
  }
}

void Adam::step() {
  for (const auto& p : params_) {
    if (!p.tensor.requires_grad() || p.tensor.grad().size() != p.tensor.numel()) {
      throw ContractError("Adam: parameter '" + p.name + "' has no gradient");
    }
  }
  ++t_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Tensor t = params_[k].tensor;
    auto w = t.mutable_values();
    auto g = t.mutable_grad();
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      w[i] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
      g[i] = 0.0;
    }
  }
}

void TrainConfig::validate() const {
  if (!(adam.lr > 0.0)) throw ConfigError("lr must be positive");
  if (epochs == 0) throw ConfigError("epochs must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(huber_delta > 0.0)) throw ConfigError("huber_delta must be positive");
}

Tensor instance_loss(const Model& model, const PreparedInstance& inst,
                     double huber_delta) {
  return huber_loss(model.forward(inst).score, inst.gold, huber_delta);
}

TrainResult train(Model& model, const TrainConfig& config,
                  const std::vector<PreparedInstance>& train_set,
                  const std::vector<PreparedInstance>& dev_set) {
  config.validate();
  if (train_set.empty()) throw ConfigError("training split is empty");
  if (dev_set.empty()) throw ConfigError("development split is empty");

  // Shuffling gets its own stream so it does not depend on how many draws
  // initialization consumed.
  Rng rng(config.seed ^ 0x5DEECE66DULL);
  Adam adam(model.parameters(), config.adam);
  model.zero_grad();

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  result.best_dev_mae = std::numeric_limits<double>::infinity();
  ParamSnapshot best = model.snapshot();
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double total_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      for (std::size_t i = start; i < end; ++i) {
        const Tensor loss = instance_loss(model, train_set[order[i]], config.huber_delta);
        total_loss += loss.item();
        loss.backward();
      }
      adam.step();
    }

    const EvalReport dev = evaluate(model, dev_set, config.clip_predictions);
    EpochRecord rec{epoch, total_loss / static_cast<double>(train_set.size()),
                    dev.mae, dev.pearson_r};
    result.log.push_back(rec);

    if (dev.mae < result.best_dev_mae) {
      result.best_dev_mae = dev.mae;
      result.best_epoch = epoch;
      best = model.snapshot();
      since_best = 0;
    } else {
      ++since_best;
      if (since_best >= config.patience) break;
    }
  }
  model.restore(best);
  return result;
}

EvalReport evaluate(const Model& model,
                    const std::vector<PreparedInstance>& instances,
                    bool clip_predictions) {
  if (instances.empty()) throw ContractError("evaluate: no instances");
  std::vector<InstancePrediction> preds;
  preds.reserve(instances.size());
  for (const auto& inst : instances) {
    const ForwardResult fr = model.forward(inst);
    double score = fr.score.item();
    if (clip_predictions) score = std::clamp(score, kMinScore, kMaxScore);
    const auto a = fr.attention.values();
    preds.push_back({inst.sentence_id, inst.anchor, inst.gold, score,
                     std::vector<double>(a.begin(), a.end())});
  }
  return make_report(std::move(preds));
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_r(const std::optional<double>& r) {
  return r ? format_real(*r) : "NA";
}

void write_epoch_line(std::ostream& os, const EpochRecord& rec) {
  os << rec.epoch << '\t' << format_real(rec.train_loss) << '\t'
     << format_real(rec.dev_mae) << '\t' << format_r(rec.dev_r) << '\n';
}

void write_predictions(std::ostream& os, const EvalReport& report) {
  for (const auto& p : report.per_instance) {
    os << p.sentence_id << '\t' << p.anchor_index << '\t' << format_real(p.gold)
       << '\t' << format_real(p.pred) << '\t';
    for (std::size_t i = 0; i < p.attention.size(); ++i) {
      if (i > 0) os << ',';
      os << format_real(p.attention[i]);
    }
    os << '\n';
  }
}

}  // namespace efp
