/* Copyright 2026 The DAGAM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cli.h"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "dagam/checkpoint.h"
#include "dagam/config.h"
#include "dagam/dataset.h"
#include "dagam/errors.h"
#include "dagam/experiments.h"
#include "dagam/files.h"
#include "dagam/report.h"
#include "dagam/synthetic.h"
#include "dagam/training.h"

namespace dagam::cli {
namespace {

namespace fs = std::filesystem;

// Flags shared by every command that trains. Unset flags leave the config
// file (or the built-in default) in place.
struct ExperimentFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> threads;
  std::optional<double> learning_rate;
  std::optional<double> k;
  std::optional<double> lambda;
  std::optional<double> sigma;
  std::optional<std::string> lambda_mode;
  std::optional<std::string> emotion_loss;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f) {
  cmd->add_option("--config", f.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Master seed (overrides config and DAGAM_SEED)");
  cmd->add_option("--epochs", f.epochs, "Training epochs");
  cmd->add_option("--batch-size", f.batch_size, "Samples per domain per step");
  cmd->add_option("--threads", f.threads, "Folds trained concurrently");
  cmd->add_option("--lr", f.learning_rate, "Adam learning rate");
  cmd->add_option("--k", f.k, "Pooling ratio in (0, 1]");
  cmd->add_option("--lambda", f.lambda, "Gradient reversal strength");
  cmd->add_option("--sigma", f.sigma, "Adjacency distance calibration");
  cmd->add_option("--lambda-mode", f.lambda_mode, "constant | schedule | off | joint");
  cmd->add_option("--emotion-loss", f.emotion_loss, "kl | cross_entropy");
}

ExperimentConfig resolve(const ExperimentFlags& f) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  apply_seed_override(c);
  if (f.seed) c.train.seed = *f.seed;
  if (f.epochs) c.train.epochs = *f.epochs;
  if (f.batch_size) c.train.batch_size = *f.batch_size;
  if (f.threads) c.threads = *f.threads;
  if (f.learning_rate) c.train.learning_rate = *f.learning_rate;
  if (f.k) c.train.model.pool_ratio = *f.k;
  if (f.lambda) c.train.lambda = *f.lambda;
  if (f.sigma) c.graph.sigma = *f.sigma;
  if (f.lambda_mode) c.train.lambda_mode = lambda_mode_from_string(*f.lambda_mode);
  if (f.emotion_loss) c.train.emotion_loss = emotion_loss_from_string(*f.emotion_loss);
  validate(c);
  return c;
}

struct Inputs {
  LoadedDataset loaded;
  FeatureDataset features;
  Json provenance;
};

Inputs load_inputs(const std::string& path, const ExperimentConfig& config) {
  Inputs in;
  in.loaded = load_dataset(path);
  in.features = to_feature_dataset(in.loaded, config.features);
  in.provenance = dataset_provenance(in.loaded, path);
  return in;
}

void write_json(const fs::path& path, const Json& doc) {
  write_file_atomic(path, doc.dump(2) + "\n");
}

// "lo:hi:step" (inclusive) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--grid", "'" + s + "' is not a number");
    }
    if (used != s.size()) throw CLI::ValidationError("--grid", "'" + s + "' is not a number");
    return v;
  };
  std::vector<std::string> parts;
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw CLI::ValidationError("--grid", "expected lo:hi:step");
    const double lo = number(parts[0]), hi = number(parts[1]), step = number(parts[2]);
    if (step == 0.0 || (hi - lo) / step < -1e-9) {
      throw CLI::ValidationError("--grid", "step does not move from lo towards hi");
    }
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i) {
      // round away accumulation error so 0.1:0.9:0.1 yields 0.3, not 0.30000000000000004
      grid.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) grid.push_back(number(p));
  }
  if (grid.empty()) throw CLI::ValidationError("--grid", "empty grid");
  return grid;
}

std::string resolve_target(const FeatureDataset& data, const std::string& requested) {
  if (requested.empty()) return data.subject_ids.back();
  for (const auto& id : data.subject_ids) {
    if (id == requested) return id;
  }
  throw DataError("unknown target subject '" + requested + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"DAGAM: graph attention with domain adversarial training for EEG emotion recognition",
               "dagam"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Write a deterministic synthetic EEG dataset");
  std::string gen_out, gen_spec;
  std::optional<std::size_t> g_subjects, g_classes, g_channels, g_trials;
  std::optional<double> g_sep, g_shift, g_seconds;
  std::optional<std::uint64_t> g_seed;
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--spec", gen_spec, "Generator spec (JSON)")->check(CLI::ExistingFile);
  gen->add_option("--subjects", g_subjects, "Subjects S");
  gen->add_option("--classes", g_classes, "Classes C");
  gen->add_option("--channels", g_channels, "Channels N (prefix of the 62-channel montage)");
  gen->add_option("--separation", g_sep, "Class separation delta");
  gen->add_option("--shift", g_shift, "Subject shift tau");
  gen->add_option("--trial-seconds", g_seconds, "Seconds per trial");
  gen->add_option("--trials-per-class", g_trials, "Trials per class and subject");
  gen->add_option("--seed", g_seed, "Generator seed");

  // features
  auto* feat = app.add_subcommand("features", "Extract DE features into a feature dataset");
  std::string feat_data, feat_out, feat_config;
  feat->add_option("--data", feat_data, "Dataset directory or manifest")->required();
  feat->add_option("--out", feat_out, "Output directory")->required();
  feat->add_option("--config", feat_config, "Experiment config (JSON)")->check(CLI::ExistingFile);

  // train
  auto* train = app.add_subcommand("train", "Train one model and write a checkpoint");
  ExperimentFlags train_flags;
  std::string train_data, train_out, train_target, train_history;
  add_experiment_flags(train, train_flags);
  train->add_option("--data", train_data, "Dataset directory or manifest")->required();
  train->add_option("--out", train_out, "Checkpoint path")->required();
  train->add_option("--target", train_target, "Unlabelled target subject (default: last)");
  train->add_option("--history", train_history, "Per-epoch losses (JSON)");

  // loocv
  auto* loo = app.add_subcommand("loocv", "Leave-one-subject-out cross-validation");
  ExperimentFlags loo_flags;
  std::string loo_data, loo_out, loo_confusion;
  add_experiment_flags(loo, loo_flags);
  loo->add_option("--data", loo_data, "Dataset directory or manifest")->required();
  loo->add_option("--out", loo_out, "Results file (JSON)")->required();
  loo->add_option("--confusion", loo_confusion, "Confusion heatmap (SVG, plus .txt)");

  // sweep-k
  auto* sweep = app.add_subcommand("sweep-k", "Cross-validate over pooling ratios");
  ExperimentFlags sweep_flags;
  std::string sweep_data, sweep_out, sweep_grid;
  add_experiment_flags(sweep, sweep_flags);
  sweep->add_option("--data", sweep_data, "Dataset directory or manifest")->required();
  sweep->add_option("--out", sweep_out, "Results file (JSON)")->required();
  sweep->add_option("--grid", sweep_grid, "lo:hi:step or k1,k2,... (default 0.9 down to 0.1)");

  // ablate
  auto* abl = app.add_subcommand("ablate", "Cross-validate the four ablation variants");
  ExperimentFlags abl_flags;
  std::string abl_data, abl_out;
  add_experiment_flags(abl, abl_flags);
  abl->add_option("--data", abl_data, "Dataset directory or manifest")->required();
  abl->add_option("--out", abl_out, "Results file (JSON)")->required();

  // report
  auto* rep = app.add_subcommand("report", "Print tables from a results file");
  std::string rep_results, rep_confusion;
  bool rep_verify = false;
  rep->add_option("results", rep_results, "Results file")->required()->check(CLI::ExistingFile);
  rep->add_flag("--verify", rep_verify, "Re-hash inputs and check provenance");
  rep->add_option("--confusion", rep_confusion, "Write the confusion heatmap (SVG, plus .txt)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  if (!argv.empty()) argv.pop_back();  // program name
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*gen) {
      SyntheticSpec spec;
      if (!gen_spec.empty()) {
        try {
          spec = synthetic_spec_from_json(Json::parse(read_file(gen_spec)));
        } catch (const nlohmann::json::parse_error& e) {
          throw ConfigError(gen_spec + ": " + e.what());
        }
      }
      if (g_subjects) spec.subjects = *g_subjects;
      if (g_classes) spec.classes = *g_classes;
      if (g_channels) spec.channels = *g_channels;
      if (g_sep) spec.separation = *g_sep;
      if (g_shift) spec.shift = *g_shift;
      if (g_seconds) spec.trial_seconds = *g_seconds;
      if (g_trials) spec.trials_per_class = *g_trials;
      if (g_seed) spec.seed = *g_seed;
      generate_synthetic(spec, gen_out);
      out << "wrote " << spec.subjects << " subjects to " << gen_out << "\n";
    } else if (*feat) {
      ExperimentConfig c = feat_config.empty() ? ExperimentConfig{} : load_config(feat_config);
      validate(c);
      const FeatureDataset data = to_feature_dataset(load_dataset(feat_data), c.features);
      write_feature_dataset(data, feat_out);
      out << "wrote " << data.samples.size() << " feature windows to " << feat_out << "\n";
    } else if (*train) {
      ExperimentConfig c = resolve(train_flags);
      const Inputs in = load_inputs(train_data, c);
      const std::string target = resolve_target(in.features, train_target);
      std::vector<FeatureSample> source;
      std::vector<Matrix> target_features;
      for (const FeatureSample& s : in.features.samples) {
        if (s.subject == target) {
          target_features.push_back(s.features);
        } else {
          source.push_back(s);
        }
      }
      c.train.model.in_features = in.features.bands.size();
      c.train.model.classes = in.features.classes();
      const GraphContext graph = build_graph(in.features.layout, c.graph);
      const TrainResult r = train_fold(source, target_features, graph, c.train);
      Json config = to_json(c);
      config["target_subject"] = target;
      write_checkpoint(r.params, config, train_out);
      if (!train_history.empty()) {
        Json history = Json::array();
        for (const EpochRecord& e : r.history) {
          history.push_back(Json{{"epoch", e.epoch},
                                 {"emotion_loss", e.emotion_loss},
                                 {"domain_loss", e.domain_loss},
                                 {"total_loss", e.total_loss},
                                 {"source_accuracy", e.source_accuracy},
                                 {"lambda", e.lambda}});
        }
        write_json(train_history, history);
      }
      out << "trained " << r.history.size() << " epochs on " << source.size()
          << " source windows; checkpoint " << train_out << "\n";
    } else if (*loo) {
      const ExperimentConfig c = resolve(loo_flags);
      const Inputs in = load_inputs(loo_data, c);
      const LoocvResult r = loocv(in.features, c);
      write_json(loo_out,
                 results_document("loocv", c, in.provenance, in.features.class_names, to_json(r)));
      if (!loo_confusion.empty()) {
        emit_confusion(r.confusion, in.features.class_names, loo_confusion, "DAGAM LOOCV");
      }
      out << loocv_table(r);
    } else if (*sweep) {
      const ExperimentConfig c = resolve(sweep_flags);
      const std::vector<double> grid = sweep_grid.empty() ? default_k_grid() : parse_grid(sweep_grid);
      for (double k : grid) {
        if (!(k > 0.0 && k <= 1.0)) throw ConfigError("pooling ratio " + format_double(k) + " is outside (0, 1]");
      }
      const Inputs in = load_inputs(sweep_data, c);
      const std::vector<SweepRow> rows = sweep_k(in.features, c, grid);
      Json payload = Json::array();
      for (const SweepRow& row : rows) {
        payload.push_back(Json{{"k", row.k}, {"pooled_nodes", row.pooled_nodes},
                               {"loocv", to_json(row.result)}});
      }
      write_json(sweep_out, results_document("sweep-k", c, in.provenance,
                                             in.features.class_names, std::move(payload)));
      out << sweep_table(rows);
    } else if (*abl) {
      const ExperimentConfig c = resolve(abl_flags);
      const Inputs in = load_inputs(abl_data, c);
      const std::vector<AblationRow> rows = ablate(in.features, c);
      Json payload = Json::array();
      for (const AblationRow& row : rows) {
        payload.push_back(Json{{"variant", row.variant},
                               {"lambda_mode", to_string(row.lambda_mode)},
                               {"emotion_loss", to_string(row.emotion_loss)},
                               {"loocv", to_json(row.result)}});
      }
      write_json(abl_out, results_document("ablate", c, in.provenance, in.features.class_names,
                                           std::move(payload)));
      out << ablation_table(rows);
    } else if (*rep) {
      Json doc;
      try {
        doc = Json::parse(read_file(rep_results));
      } catch (const nlohmann::json::parse_error& e) {
        throw DataError(rep_results + ": " + e.what());
      }
      if (rep_verify) {
        const VerifyOutcome v = verify_results(doc);
        if (!v.ok) {
          for (const auto& p : v.problems) err << "provenance: " << p << "\n";
          return kDataOrConfig;
        }
        out << "provenance verified: " << doc.at("dataset").at("files").size()
            << " inputs match their recorded hashes\n";
      }
      const std::string command = doc.value("command", "");
      const auto classes = doc.value("classes", std::vector<std::string>{});
      const Json& result = doc.at("result");
      std::optional<ConfusionMatrix> matrix;
      if (command == "loocv") {
        const LoocvResult r = loocv_from_json(result);
        out << loocv_table(r);
        matrix = r.confusion;
      } else if (command == "sweep-k") {
        std::vector<SweepRow> rows;
        for (const Json& row : result) {
          rows.push_back({row.at("k").get<double>(), row.at("pooled_nodes").get<std::size_t>(),
                          loocv_from_json(row.at("loocv"))});
        }
        out << sweep_table(rows);
      } else if (command == "ablate") {
        std::vector<AblationRow> rows;
        for (const Json& row : result) {
          rows.push_back({row.at("variant").get<std::string>(),
                          lambda_mode_from_string(row.at("lambda_mode").get<std::string>()),
                          emotion_loss_from_string(row.at("emotion_loss").get<std::string>()),
                          loocv_from_json(row.at("loocv"))});
        }
        out << ablation_table(rows);
        if (!rows.empty()) matrix = rows.front().result.confusion;
      } else {
        throw DataError(rep_results + ": unknown command '" + command + "'");
      }
      if (matrix) {
        out << "\n" << confusion_table(*matrix, classes);
        if (!rep_confusion.empty()) emit_confusion(*matrix, classes, rep_confusion, "DAGAM");
      } else if (!rep_confusion.empty()) {
        throw DataError("results file has no single confusion matrix");
      }
    }
  } catch (const TrainingDivergenceError& e) {
    err << "error: training diverged: " << e.what() << "\n";
    return kDivergence;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kDataOrConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataOrConfig;
  }
  return kOk;
}

}  // namespace dagam::cli
