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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "efp/cli.h"
#include "efp/config.h"
#include "efp/grad_check.h"
#include "efp/head.h"
#include "efp/metrics.h"
#include "efp/model.h"
#include "efp/structure.h"
#include "efp/synth.h"
#include "efp/trainer.h"
#include "support/test_util.h"

namespace fs = std::filesystem;
using namespace efp;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

RunConfig desk() { return load_config(test::source_path("configs/desk.cfg")); }

SynthSpec spec_file(const std::string& rel) {
  return parse_synth_spec(read_file(test::source_path(rel)));
}

bool bit_equal(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// 1. Full-pipeline gradient check at desk dimensions.
Outcome gradient_integrity() {
  const auto res = gradcheck_model(desk().model, 1, 1e-5);
  return {res.report.max_rel_error < 1e-4,
          "max rel error " + fmt("%.3g", res.report.max_rel_error) + " over " +
              std::to_string(res.num_scalars) + " parameters (" +
              std::to_string(res.report.one_sided) + " one-sided)"};
}

// 2. A_syn against the edge-set oracle on 500 random trees.
Outcome structure_correctness() {
  Rng rng(500);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.below(12);
    const auto tokens = test::random_tree(n, rng);
    const Tensor a = syntactic_adjacency(tokens);
    const auto edges = test::edge_set(tokens);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double want = edges.count({i, j}) ? 1.0 : 0.0;
        if (a.at(i, j) != want || a.at(i, j) != a.at(j, i)) {
          return {false, "tree " + std::to_string(t) + " differs at (" +
                             std::to_string(i) + "," + std::to_string(j) + ")"};
        }
        ones += a.at(i, j) == 1.0;
      }
      if (a.at(i, i) != 1.0) return {false, "diagonal not 1"};
    }
    if (ones != n + 2 * (n - 1)) return {false, "one-count mismatch"};
  }
  return {true, "500 trees match the oracle; symmetric; unit diagonal"};
}

PreparedInstance treatment_instance(std::size_t dim) {
  Dataset ds;
  ds.sentences = parse_conllu(read_file(test::source_path("fixtures/treatment/sentences.conllu")));
  ds.annotations = parse_annotations(read_file(test::source_path("fixtures/treatment/annotations.tsv")));
  ds.manifest = parse_manifest(read_file(test::source_path("fixtures/treatment/manifest.tsv")));
  const auto split = join_and_split(std::span<const Dataset>(&ds, 1));
  std::istringstream emb(read_file(test::source_path("fixtures/embeddings.txt")));
  return prepare_instance(split.test.at(0), load_embeddings(emb, dim));
}

// 3. lambda = 0 blocks the semantic path; lambda = 1 ignores the tree.
Outcome blend_ablations() {
  ModelConfig mc = desk().model;
  PreparedInstance inst = treatment_instance(mc.embed_dim);

  mc.lambda = 0.0;
  Model m0(mc);
  m0.initialize(3);
  std::vector<Tensor> sem;
  std::vector<std::string> names;
  for (const auto& p : m0.parameters()) {
    if (p.name.rfind("structure.", 0) == 0) {
      sem.push_back(p.tensor);
      names.push_back(p.name);
    }
  }
  auto loss = [&] {
    const Tensor e = sub(m0.forward(inst).score, Tensor::vector({inst.gold}));
    return sum(mul(e, e));
  };
  const auto rep = grad_check(loss, sem, 1e-5, names);
  for (const auto& p : rep.params) {
    if (p.max_abs_numeric != 0.0 || p.max_abs_analytic != 0.0) {
      return {false, p.name + " has a non-zero gradient at lambda 0"};
    }
  }

  mc.lambda = 1.0;
  Model m1(mc);
  m1.initialize(4);
  const ForwardResult base = m1.forward(inst);
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    PreparedInstance other = inst;
    other.tokens = test::random_tree(inst.tokens.size(), rng);
    for (std::size_t i = 0; i < other.tokens.size(); ++i) {
      other.tokens[i].form = inst.tokens[i].form;
    }
    other.syntactic = syntactic_adjacency(other.tokens);
    const ForwardResult r = m1.forward(other);
    if (!bit_equal(r.score.values(), base.score.values()) ||
        !bit_equal(r.attention.values(), base.attention.values())) {
      return {false, "prediction changed under tree " + std::to_string(t)};
    }
  }
  return {true, std::to_string(names.size()) +
                    " semantic tensors have zero FD and analytic gradient at lambda 0; "
                    "prediction bit-identical under 50 other trees at lambda 1"};
}

// 4. With lambda 0 on a 9-token path, two GCN layers reach two hops only.
Outcome two_hop_locality() {
  ModelConfig mc = desk().model;
  mc.lambda = 0.0;
  Model model(mc);
  model.initialize(5);
  const auto tokens = test::path_tree(9);
  const Tensor syn = syntactic_adjacency(tokens);
  Rng rng(9);
  std::vector<double> emb(9 * mc.embed_dim);
  for (auto& x : emb) x = rng.uniform(-1.0, 1.0);
  const Tensor encoded = encode(Tensor({9, mc.embed_dim}, emb), model.encoder);

  std::vector<double> bumped(encoded.values().begin(), encoded.values().end());
  for (std::size_t c = 0; c < encoded.dim(1); ++c) bumped[c] += 0.5;
  const Tensor encoded2(encoded.shape(), bumped);

  const Tensor a = model.forward_encoded(encoded, syn, 8).propagated;
  const Tensor b = model.forward_encoded(encoded2, syn, 8).propagated;
  const std::size_t w = a.dim(1);
  for (std::size_t r = 3; r < 9; ++r) {
    if (!bit_equal(a.values().subspan(r * w, w), b.values().subspan(r * w, w))) {
      return {false, "row " + std::to_string(r) + " changed"};
    }
  }
  bool near_changed = false;
  for (std::size_t r = 0; r < 3; ++r) {
    near_changed = near_changed ||
                   !bit_equal(a.values().subspan(r * w, w), b.values().subspan(r * w, w));
  }
  return {near_changed, near_changed ? "rows 3..8 bit-identical, rows 0..2 moved"
                                     : "perturbation did not reach rows 0..2"};
}

// 5. Overfit the 32-sentence corpus and generalize to its held-out part.
Outcome synthetic_overfit() {
  const RunConfig rc = desk();
  const auto data = test::prepare_synth(generate_synth(spec_file("configs/synth_overfit.spec")));
  Model model(rc.model);
  model.initialize(rc.train.seed);
  const TrainResult tr = train(model, rc.train, data.train, data.dev);
  const double train_mae = evaluate(model, data.train).mae;
  const double test_mae = evaluate(model, data.test).mae;
  return {tr.log.size() <= 200 && train_mae < 0.1 && test_mae < 0.5,
          "train MAE " + fmt("%.4f", train_mae) + " (n=" + std::to_string(data.train.size()) +
              "), held-out MAE " + fmt("%.4f", test_mae) + " (n=" +
              std::to_string(data.test.size()) + "), " + std::to_string(tr.log.size()) +
              " epochs"};
}

// 6. lambda 0.6 against lambda 1 over five seeds, 30 epochs each.
Outcome syntax_benefit() {
  RunConfig rc = desk();
  rc.train.epochs = 30;
  int wins = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SynthSpec spec = spec_file("configs/synth_syntax.spec");
    spec.seed = seed;
    const auto data = test::prepare_synth(generate_synth(spec));
    double dev[2];
    const double lambdas[2] = {0.6, 1.0};
    for (int k = 0; k < 2; ++k) {
      ModelConfig mc = rc.model;
      mc.lambda = lambdas[k];
      Model model(mc);
      model.initialize(seed);
      TrainConfig tc = rc.train;
      tc.seed = seed;
      dev[k] = train(model, tc, data.train, data.dev).best_dev_mae;
    }
    wins += dev[0] <= dev[1];
    detail += " s" + std::to_string(seed) + ":" + fmt("%.3f", dev[0]) + "/" + fmt("%.3f", dev[1]);
  }
  return {wins >= 4, std::to_string(wins) + "/5 seeds with dev MAE(0.6) <= MAE(1);" + detail};
}

// 7. Metrics against two-pass oracles; Huber continuity at |e| = delta.
Outcome metric_oracles() {
  Rng rng(77);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.below(199);
    std::vector<double> p(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = rng.uniform(-3.0, 3.0);
      p[i] = 0.7 * g[i] + rng.uniform(-1.0, 1.0) + 5.0;
    }
    worst = std::max(worst, std::abs(mae(p, g) - test::oracle_mae(p, g)));
    worst = std::max(worst, std::abs(*pearson(p, g) - test::oracle_pearson(p, g)));
  }
  double jump = 0.0;
  for (double delta : {0.1, 0.5, 1.0, 2.0, 3.7}) {
    for (double sgn : {-1.0, 1.0}) {
      const double e = sgn * delta;
      const double quad_v = 0.5 * e * e;
      const double lin_v = delta * (std::abs(e) - 0.5 * delta);
      jump = std::max({jump, std::abs(huber_value(e, delta) - quad_v),
                       std::abs(huber_value(e, delta) - lin_v),
                       std::abs(huber_derivative(e, delta) - e),
                       std::abs(huber_derivative(std::nextafter(e, 10 * e), delta) - e)});
    }
  }
  return {worst < 1e-10 && jump < 1e-12,
          "max metric deviation " + fmt("%.2g", worst) + ", Huber jump " + fmt("%.2g", jump)};
}

// 8. Two identical train runs through the command line tool.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "efp_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string tool = EFP_TOOL_PATH;
  auto run = [&](const std::string& args) {
    const std::string cmd = "\"" + tool + "\" " + args + " > /dev/null";
    return std::system(cmd.c_str());
  };
  {
    std::ofstream cfg(root / "run.cfg");
    cfg << read_file(test::source_path("configs/desk.cfg")) << "epochs = 25\n";
  }
  if (run("synth --spec \"" + test::source_path("configs/synth_overfit.spec") +
          "\" --out \"" + (root / "data").string() + "\"") != 0) {
    return {false, "synth failed"};
  }
  for (const char* out : {"a", "b"}) {
    if (run("train --config \"" + (root / "run.cfg").string() + "\" --seed 11 --data \"" +
            (root / "data").string() + "\" --out \"" + (root / out).string() + "\"") != 0) {
      return {false, "train failed"};
    }
  }
  const bool logs = test::slurp(root / "a/train.log") == test::slurp(root / "b/train.log");
  const bool ckpts = test::slurp(root / "a/model.ckpt") == test::slurp(root / "b/model.ckpt");
  const auto ckpt_size = fs::file_size(root / "a/model.ckpt");
  fs::remove_all(root);
  return {logs && ckpts, std::string("train.log ") + (logs ? "identical" : "DIFFERS") +
                             ", model.ckpt " + (ckpts ? "identical" : "DIFFERS") + " (" +
                             std::to_string(ckpt_size) + " bytes)"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "gradient integrity", 60, gradient_integrity},
      {2, "structure correctness", 10, structure_correctness},
      {3, "blend ablations", 60, blend_ablations},
      {4, "two-hop locality", 10, two_hop_locality},
      {5, "synthetic overfit", 180, synthetic_overfit},
      {6, "syntax benefit", 600, syntax_benefit},
      {7, "metric oracles", 10, metric_oracles},
      {8, "determinism", 600, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool ok = o.passed && in_time;
    failures += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name
              << "): " << o.detail << "; " << fmt("%.1f", secs) << " s of "
              << fmt("%.0f", c.budget_s) << " s" << (in_time ? "" : " OVER BUDGET")
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
