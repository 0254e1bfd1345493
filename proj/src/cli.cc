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

#include "efp/cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "efp/checkpoint.h"
#include "efp/config.h"
#include "efp/corpus.h"
#include "efp/errors.h"
#include "efp/fixtures.h"
#include "efp/rng.h"
#include "efp/synth.h"
#include "efp/trainer.h"

namespace efp {
namespace {

namespace fs = std::filesystem;

constexpr double kGradcheckThreshold = 1e-4;

// Flags shared by every command. Unset optionals defer to the config file.
struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct DataOptions {
  std::vector<std::string> data_dirs;
  std::vector<std::string> conllu;
  std::vector<std::string> annotations;
  std::vector<std::string> manifest;
  std::string embeddings;
};

struct VariantOptions {
  std::optional<double> lambda;
  bool no_structure = false;
  bool no_attention = false;
  bool row_normalize = false;
};

void add_data_options(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--data", d.data_dirs,
                  "Directory with corpus.conllu (or sentences.conllu), annotations.tsv, "
                  "manifest.tsv and optionally embeddings.txt. Repeatable.");
  cmd->add_option("--conllu", d.conllu, "CoNLL-U parses. Repeatable.");
  cmd->add_option("--annotations", d.annotations,
                  "Annotation TSV, one per --conllu.");
  cmd->add_option("--manifest", d.manifest, "Split manifest, one per --conllu.");
  cmd->add_option("--embeddings", d.embeddings, "Word vectors, 'token v1 ... vD'.");
}

void add_variant_options(CLI::App* cmd, VariantOptions& v) {
  cmd->add_option("--lambda", v.lambda, "Blend weight of the semantic matrix.");
  cmd->add_flag("--no-structure", v.no_structure, "Skip structure induction and GCN.");
  cmd->add_flag("--no-attention", v.no_attention, "Use the anchor row only.");
  cmd->add_flag("--row-normalize", v.row_normalize, "Row-normalize the blended matrix.");
}

RunConfig resolve_config(const GlobalOptions& g, const VariantOptions* v) {
  RunConfig rc = g.config.empty() ? RunConfig{} : load_config(g.config);
  if (g.seed) rc.train.seed = *g.seed;
  if (v) {
    if (v->lambda) rc.model.lambda = *v->lambda;
    rc.model.no_structure = rc.model.no_structure || v->no_structure;
    rc.model.no_attention = rc.model.no_attention || v->no_attention;
    rc.model.row_normalize = rc.model.row_normalize || v->row_normalize;
  }
  if (!(rc.model.lambda >= 0.0 && rc.model.lambda <= 1.0)) {
    throw ConfigError("lambda " + format_real(rc.model.lambda) + " outside [0, 1]");
  }
  return rc;
}

struct LoadedData {
  DatasetSplit split;
  EmbeddingTable table{1};
};

LoadedData load_data(const DataOptions& d, std::size_t expected_dim) {
  std::vector<std::string> conllu, annotations, manifest;
  for (const auto& dir : d.data_dirs) {
    // Fixture directories name the parse file sentences.conllu.
    const fs::path parses = fs::path(dir) / "corpus.conllu";
    const fs::path alt = fs::path(dir) / "sentences.conllu";
    conllu.push_back((!fs::exists(parses) && fs::exists(alt) ? alt : parses).string());
    annotations.push_back((fs::path(dir) / "annotations.tsv").string());
    manifest.push_back((fs::path(dir) / "manifest.tsv").string());
  }
  conllu.insert(conllu.end(), d.conllu.begin(), d.conllu.end());
  annotations.insert(annotations.end(), d.annotations.begin(), d.annotations.end());
  manifest.insert(manifest.end(), d.manifest.begin(), d.manifest.end());
  if (conllu.empty()) throw ConfigError("no corpus given (use --data or --conllu)");
  if (annotations.size() != conllu.size() || manifest.size() != conllu.size()) {
    throw ConfigError("need one --annotations and one --manifest per --conllu");
  }

  std::string emb_path = d.embeddings;
  if (emb_path.empty() && !d.data_dirs.empty()) {
    emb_path = (fs::path(d.data_dirs.front()) / "embeddings.txt").string();
  }
  if (emb_path.empty()) throw ConfigError("no embeddings given (use --embeddings)");

  std::vector<Dataset> sets(conllu.size());
  for (std::size_t i = 0; i < conllu.size(); ++i) {
    sets[i].sentences = parse_conllu(read_file(conllu[i]));
    sets[i].annotations = parse_annotations(read_file(annotations[i]));
    sets[i].manifest = parse_manifest(read_file(manifest[i]));
  }
  LoadedData out;
  std::istringstream emb(read_file(emb_path));
  out.table = load_embeddings(emb, expected_dim == 0 ? std::nullopt
                                                     : std::optional(expected_dim));
  out.split = join_and_split(sets);
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write '" + path.string() + "'");
  os << text;
}

nlohmann::json metric_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string dump_predictions(const EvalReport& r) {
  std::ostringstream os;
  write_predictions(os, r);
  return os.str();
}

Split split_option(const std::string& name) {
  try {
    return parse_split(name);
  } catch (const Error&) {
    throw ConfigError("--split must be train, dev or test, got '" + name + "'");
  }
}

// ---------------------------------------------------------------- commands

int cmd_train(const GlobalOptions& g, const DataOptions& d, const VariantOptions& v,
              std::ostream& out) {
  RunConfig rc = resolve_config(g, &v);
  LoadedData data = load_data(d, rc.model.embed_dim);
  rc.model.embed_dim = data.table.dim();
  rc.model.validate();

  const auto train_set = prepare_instances(data.split.train, data.table);
  const auto dev_set = prepare_instances(data.split.dev, data.table);
  const auto test_set = prepare_instances(data.split.test, data.table);

  Model model(rc.model);
  model.initialize(rc.train.seed);
  const TrainResult result = train(model, rc.train, train_set, dev_set);

  const fs::path dir = g.out.empty() ? fs::path("efp_run") : fs::path(g.out);
  fs::create_directories(dir);

  const EvalReport train_report = evaluate(model, train_set, rc.train.clip_predictions);
  std::optional<EvalReport> test_report;
  if (!test_set.empty()) test_report = evaluate(model, test_set, rc.train.clip_predictions);

  std::ostringstream log;
  for (const auto& rec : result.log) write_epoch_line(log, rec);
  nlohmann::ordered_json summary;
  summary["best_epoch"] = result.best_epoch;
  summary["best_dev_mae"] = result.best_dev_mae;
  summary["epochs_run"] = result.log.size();
  summary["train_mae"] = train_report.mae;
  summary["train_r"] = metric_json(train_report.pearson_r);
  summary["test_n"] = test_report ? test_report->n : 0;
  summary["test_mae"] = test_report ? nlohmann::json(test_report->mae) : nlohmann::json(nullptr);
  summary["test_r"] = test_report ? metric_json(test_report->pearson_r) : nlohmann::json(nullptr);
  log << summary.dump() << '\n';

  save_checkpoint((dir / "model.ckpt").string(), model);
  write_text(dir / "config.cfg", serialize_config(rc));
  write_text(dir / "train.log", log.str());
  if (test_report) write_text(dir / "test_predictions.tsv", dump_predictions(*test_report));

  out << "best_epoch\t" << result.best_epoch << "\tdev_mae\t"
      << format_real(result.best_dev_mae) << '\n';
  if (test_report) {
    out << "test\tMAE\t" << format_real(test_report->mae) << "\tr\t"
        << format_r(test_report->pearson_r) << '\n';
  }
  out << "wrote " << dir.string() << '\n';
  return kExitOk;
}

// Model restored from a checkpoint. The config defaults to the config.cfg
// stored beside the checkpoint.
struct Restored {
  RunConfig config;
  LoadedData data;
  std::optional<Model> model;
};

Restored restore(GlobalOptions g, const DataOptions& d, const VariantOptions& v,
                 const std::string& ckpt_path) {
  if (g.config.empty()) {
    const fs::path beside = fs::path(ckpt_path).parent_path() / "config.cfg";
    if (fs::exists(beside)) g.config = beside.string();
  }
  Restored r;
  r.config = resolve_config(g, &v);
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  r.data = load_data(d, r.config.model.embed_dim);
  r.config.model.embed_dim = r.data.table.dim();
  r.config.model.validate();
  r.model.emplace(r.config.model);
  apply_checkpoint(ckpt, *r.model);
  return r;
}

int cmd_evaluate(const GlobalOptions& g, const DataOptions& d, const VariantOptions& v,
                 const std::string& ckpt, const std::string& split_name_opt,
                 std::ostream& out) {
  const Split split = split_option(split_name_opt);
  Restored r = restore(g, d, v, ckpt);
  const auto& insts = r.data.split.get(split);
  if (insts.empty()) {
    throw ConfigError("split '" + split_name(split) + "' has no instances");
  }
  const auto prepared = prepare_instances(insts, r.data.table);
  const EvalReport report = evaluate(*r.model, prepared, r.config.train.clip_predictions);
  out << format_real(report.mae) << '\t' << format_r(report.pearson_r) << '\n';
  const fs::path dir = g.out.empty() ? fs::path(ckpt).parent_path() : fs::path(g.out);
  if (!dir.empty()) fs::create_directories(dir);
  write_text(dir / (split_name(split) + "_predictions.tsv"), dump_predictions(report));
  return kExitOk;
}

int cmd_predict(const GlobalOptions& g, const DataOptions& d, const VariantOptions& v,
                const std::string& ckpt, const std::string& split_name_opt,
                bool dump_affinity, std::ostream& out) {
  const Split split = split_option(split_name_opt);
  Restored r = restore(g, d, v, ckpt);
  const auto prepared = prepare_instances(r.data.split.get(split), r.data.table);
  std::vector<InstancePrediction> preds;
  for (const auto& inst : prepared) {
    const ForwardResult fr = r.model->forward(inst);
    const auto alpha = fr.attention.values();
    preds.push_back({inst.sentence_id, inst.anchor, inst.gold, fr.score.item(),
                     std::vector<double>(alpha.begin(), alpha.end())});
    if (dump_affinity && fr.structure) {
      const fs::path dir = fs::path(g.out.empty() ? "." : g.out) / "affinity";
      fs::create_directories(dir);
      const std::string stem = inst.sentence_id + "_" + std::to_string(inst.anchor);
      auto dump = [&](const char* suffix, const Tensor& m) {
        std::ostringstream os;
        write_matrix_tsv(os, m);
        write_text(dir / (stem + suffix), os.str());
      };
      dump(".semantic.tsv", fr.structure->semantic);
      dump(".syntactic.tsv", fr.structure->syntactic);
      dump(".blended.tsv", fr.structure->blended);
    }
  }
  EvalReport report;
  report.per_instance = std::move(preds);
  report.n = report.per_instance.size();
  write_predictions(out, report);
  return kExitOk;
}

int cmd_gradcheck(const GlobalOptions& g, const VariantOptions& v, bool full,
                  bool inject_fault, double epsilon, std::ostream& out) {
  const RunConfig rc = resolve_config(g, &v);
  const ModelConfig mc = full ? rc.model : tiny_config(rc.model);
  testing::set_tanh_gradient_fault(inject_fault);
  GradcheckOutcome res;
  try {
    res = gradcheck_model(mc, rc.train.seed, epsilon);
  } catch (...) {
    testing::set_tanh_gradient_fault(false);
    throw;
  }
  testing::set_tanh_gradient_fault(false);

  for (const auto& p : res.report.params) {
    out << p.name << '\t' << format_real(p.max_rel_error) << '\t'
        << format_real(p.max_abs_analytic) << '\t' << format_real(p.max_abs_numeric)
        << '\t' << p.one_sided << '\n';
  }
  const bool ok = res.report.max_rel_error < kGradcheckThreshold;
  out << "parameters\t" << res.num_scalars << '\n'
      << "one_sided\t" << res.report.one_sided << '\n'
      << "max_rel_error\t" << format_real(res.report.max_rel_error) << '\n'
      << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitVerificationFailed;
}

int cmd_synth(const GlobalOptions& g, const std::string& spec_path, std::ostream& out) {
  SynthSpec spec = spec_path.empty() ? SynthSpec{} : parse_synth_spec(read_file(spec_path));
  if (spec_path.empty()) spec.cues = default_cues();
  if (g.seed) spec.seed = *g.seed;
  if (g.out.empty()) throw ConfigError("synth needs --out DIR");
  const SynthCorpus corpus = generate_synth(spec);
  write_synth(corpus, g.out);
  out << "wrote " << corpus.sentences.size() << " sentences to " << g.out << '\n';
  return kExitOk;
}

int cmd_selfcheck(const std::string& root, std::ostream& out) {
  if (!fs::is_directory(root)) throw Error("file not found: '" + root + "'");
  const auto checks = fixture_selfcheck(root);
  bool ok = !checks.empty();
  for (const auto& c : checks) {
    out << (c.passed ? "PASS" : "FAIL") << '\t' << c.name << '\t' << c.detail << '\n';
    ok = ok && c.passed;
  }
  return ok ? kExitOk : kExitVerificationFailed;
}

}  // namespace

ModelConfig tiny_config(const ModelConfig& base) {
  ModelConfig c = base;
  auto cap = [](std::size_t& v) { v = std::min<std::size_t>(v, 8); };
  if (c.embed_dim == 0) c.embed_dim = 4;
  cap(c.embed_dim);
  cap(c.hidden);
  cap(c.proj);
  cap(c.gcn_features);
  cap(c.attention);
  cap(c.regressor);
  return c;
}

PreparedInstance gradcheck_sentence(std::size_t embed_dim, std::uint64_t seed) {
  SentenceInstance inst;
  inst.sentence_id = "gradcheck";
  const char* forms[] = {"She", "will", "not", "go"};
  for (std::size_t i = 0; i < 4; ++i) {
    inst.tokens.push_back({i, forms[i], i == 3 ? std::nullopt : std::optional<std::size_t>(3),
                           i == 3 ? "root" : "dep"});
  }
  inst.anchor_index = 3;
  inst.gold_score = -1.5;

  EmbeddingTable table(embed_dim);
  Rng rng(seed ^ 0xE3B0C442ULL);
  for (const char* f : forms) {
    std::vector<double> v(embed_dim);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    table.add(f, std::move(v));
  }
  return prepare_instance(inst, table);
}

GradcheckOutcome gradcheck_model(const ModelConfig& config, std::uint64_t seed,
                                 double epsilon) {
  ModelConfig mc = config;
  if (mc.embed_dim == 0) mc.embed_dim = 4;
  mc.validate();
  Model model(mc);
  model.initialize(seed);
  const PreparedInstance inst = gradcheck_sentence(mc.embed_dim, seed);

  const ParamList params = model.parameters();
  std::vector<Tensor> tensors;
  std::vector<std::string> names;
  for (const auto& p : params) {
    tensors.push_back(p.tensor);
    names.push_back(p.name);
  }
  // Squared error keeps the loss smooth everywhere, unlike Huber at |e| = delta.
  auto loss = [&] {
    const Tensor pred = model.forward(inst).score;
    const Tensor e = sub(pred, Tensor::vector({inst.gold}));
    return sum(mul(e, e));
  };
  GradcheckOutcome res;
  res.report = grad_check(loss, tensors, epsilon, names, true);
  res.num_scalars = count_scalars(params);
  return res;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"efp: graph-based event factuality regression"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  GlobalOptions g;
  auto add_globals = [&](CLI::App* cmd) {
    cmd->add_option("--config", g.config, "Run configuration (key = value).");
    cmd->add_option("--seed", g.seed, "Seed, overrides the config.");
    cmd->add_option("--out", g.out, "Output directory.");
  };

  DataOptions data;
  VariantOptions variant;
  std::string checkpoint;
  std::string split = "test";
  std::string spec_path;
  std::string fixtures_root = "fixtures";
  bool dump_affinity = false;
  bool full = false;
  bool inject_fault = false;
  double epsilon = 1e-5;

  auto* train_cmd = app.add_subcommand("train", "Train a model and evaluate on test.");
  add_globals(train_cmd);
  add_data_options(train_cmd, data);
  add_variant_options(train_cmd, variant);

  auto* eval_cmd = app.add_subcommand("evaluate", "Print MAE<TAB>r for a split.");
  add_globals(eval_cmd);
  add_data_options(eval_cmd, data);
  add_variant_options(eval_cmd, variant);
  eval_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file.")->required();
  eval_cmd->add_option("--split", split, "train, dev or test.");

  auto* predict_cmd = app.add_subcommand("predict", "Write per-instance predictions.");
  add_globals(predict_cmd);
  add_data_options(predict_cmd, data);
  add_variant_options(predict_cmd, variant);
  predict_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file.")->required();
  predict_cmd->add_option("--split", split, "train, dev or test.");
  predict_cmd->add_flag("--dump-affinity", dump_affinity,
                        "Write the three n x n matrices per instance under OUT/affinity.");

  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient check.");
  add_globals(grad_cmd);
  add_variant_options(grad_cmd, variant);
  grad_cmd->add_flag("--full", full, "Keep the configured dimensions (no cap at 8).");
  grad_cmd->add_flag("--inject-fault", inject_fault,
                     "Corrupt the tanh derivative (negative control).");
  grad_cmd->add_option("--epsilon", epsilon, "Central-difference step.");

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic cue corpus.");
  add_globals(synth_cmd);
  synth_cmd->add_option("--spec", spec_path, "Synthetic corpus spec.");

  auto* check_cmd = app.add_subcommand("selfcheck", "Validate the shipped fixtures.");
  check_cmd->add_option("--fixtures", fixtures_root, "Fixture root directory.");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*train_cmd) return cmd_train(g, data, variant, out);
    if (*eval_cmd) return cmd_evaluate(g, data, variant, checkpoint, split, out);
    if (*predict_cmd) {
      return cmd_predict(g, data, variant, checkpoint, split, dump_affinity, out);
    }
    if (*grad_cmd) return cmd_gradcheck(g, variant, full, inject_fault, epsilon, out);
    if (*synth_cmd) return cmd_synth(g, spec_path, out);
    if (*check_cmd) return cmd_selfcheck(fixtures_root, out);
  } catch (const std::exception& e) {
    err << "efp: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace efp
