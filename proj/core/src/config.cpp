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

#include "dagam/config.h"

#include <cctype>
#include <cstdlib>
#include <set>
#include <string>
#include <type_traits>

#include "dagam/errors.h"
#include "dagam/files.h"

namespace dagam {
namespace {

bool negative_integer(const Json& v) {
  return v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0;
}

template <typename T>
T get(const Json& json, const char* key) {
  try {
    const Json& v = json.at(key);
    if constexpr (std::is_unsigned_v<T>) {
      if (negative_integer(v)) throw ConfigError(std::string("config key '") + key + "' must be >= 0");
    } else if constexpr (std::is_same_v<T, std::vector<std::size_t>>) {
      for (const Json& e : v) {
        if (negative_integer(e)) throw ConfigError(std::string("config key '") + key + "' must be >= 0");
      }
    }
    return v.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void check_keys(const Json& json, const char* section, std::set<std::string> allowed) {
  if (!json.is_object()) throw ConfigError(std::string(section) + " must be an object");
  for (const auto& [key, value] : json.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown config key '" + key + "' in " + section);
    }
  }
}

}  // namespace

const char* to_string(LambdaMode mode) {
  switch (mode) {
    case LambdaMode::kConstant: return "constant";
    case LambdaMode::kSchedule: return "schedule";
    case LambdaMode::kOff: return "off";
    case LambdaMode::kJoint: return "joint";
  }
  return "constant";
}

LambdaMode lambda_mode_from_string(const std::string& text) {
  if (text == "constant") return LambdaMode::kConstant;
  if (text == "schedule") return LambdaMode::kSchedule;
  if (text == "off") return LambdaMode::kOff;
  if (text == "joint") return LambdaMode::kJoint;
  throw ConfigError("unknown lambda mode '" + text + "'");
}

const char* to_string(EmotionLossKind kind) {
  return kind == EmotionLossKind::kKl ? "kl" : "cross_entropy";
}

EmotionLossKind emotion_loss_from_string(const std::string& text) {
  if (text == "kl") return EmotionLossKind::kKl;
  if (text == "cross_entropy") return EmotionLossKind::kCrossEntropy;
  throw ConfigError("unknown emotion loss '" + text + "'");
}

void validate(const ExperimentConfig& c) {
  if (!(c.graph.sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (!(c.graph.global_weight >= -1.0 && c.graph.global_weight <= 0.0)) {
    throw ConfigError("global_weight must lie in [-1, 0]");
  }
  if (c.features.bands.empty()) throw ConfigError("at least one band is required");
  if (!(c.features.window_s > 0.0)) throw ConfigError("window_s must be positive");
  const auto& m = c.train.model;
  if (!(m.pool_ratio > 0.0 && m.pool_ratio <= 1.0)) throw ConfigError("k must lie in (0, 1]");
  if (m.gcn_widths.empty()) throw ConfigError("at least one GCN layer is required");
  if (!(c.train.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (c.train.batch_size == 0) throw ConfigError("batch size must be positive");
  if (!(c.train.lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (c.threads == 0) throw ConfigError("threads must be positive");
}

Json to_json(const ExperimentConfig& c) {
  Json graph;
  graph["sigma"] = c.graph.sigma;
  if (c.graph.global_pairs) {
    Json pairs = Json::array();
    for (const auto& [a, b] : *c.graph.global_pairs) pairs.push_back({a, b});
    graph["global_pairs"] = pairs;
  } else {
    graph["global_pairs"] = "default";
  }
  graph["global_weight"] = c.graph.global_weight;

  Json features;
  Json bands = Json::array();
  for (const Band& b : c.features.bands) {
    bands.push_back(Json{{"name", b.name}, {"lo", b.lo}, {"hi", b.hi}});
  }
  features["bands"] = bands;
  features["window_s"] = c.features.window_s;
  features["target_rate"] = c.features.preprocess.target_rate;
  features["prefilter_lo"] = c.features.preprocess.lo;
  features["prefilter_hi"] = c.features.preprocess.hi;

  const auto& m = c.train.model;
  Json model;
  model["k"] = m.pool_ratio;
  model["gcn_widths"] = m.gcn_widths;
  model["emotion_hidden"] = m.emotion_hidden;
  model["domain_hidden"] = m.domain_hidden;

  Json train;
  train["learning_rate"] = c.train.learning_rate;
  train["epochs"] = c.train.epochs;
  train["batch_size"] = c.train.batch_size;
  train["lambda_mode"] = to_string(c.train.lambda_mode);
  train["lambda"] = c.train.lambda;
  train["emotion_loss"] = to_string(c.train.emotion_loss);
  train["seed"] = c.train.seed;

  Json out;
  out["graph"] = graph;
  out["features"] = features;
  out["model"] = model;
  out["train"] = train;
  out["threads"] = c.threads;
  return out;
}

ExperimentConfig config_from_json(const Json& json, ExperimentConfig c) {
  check_keys(json, "config", {"graph", "features", "model", "train", "threads"});
  if (json.contains("graph")) {
    const Json& g = json["graph"];
    check_keys(g, "graph", {"sigma", "global_pairs", "global_weight"});
    if (g.contains("sigma")) c.graph.sigma = get<double>(g, "sigma");
    if (g.contains("global_weight")) c.graph.global_weight = get<double>(g, "global_weight");
    if (g.contains("global_pairs")) {
      const Json& pairs = g["global_pairs"];
      if (pairs.is_string() && pairs.get<std::string>() == "default") {
        c.graph.global_pairs.reset();
      } else if (pairs.is_array()) {
        std::vector<ChannelPair> list;
        for (const Json& p : pairs) {
          if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
            throw ConfigError("global_pairs entries must be [name, name]");
          }
          list.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
        }
        c.graph.global_pairs = std::move(list);
      } else {
        throw ConfigError("global_pairs must be \"default\" or a list of pairs");
      }
    }
  }
  if (json.contains("features")) {
    const Json& f = json["features"];
    check_keys(f, "features", {"bands", "window_s", "target_rate", "prefilter_lo", "prefilter_hi"});
    if (f.contains("bands")) {
      std::vector<Band> bands;
      for (const Json& b : f["bands"]) {
        bands.push_back({get<std::string>(b, "name"), get<double>(b, "lo"), get<double>(b, "hi")});
      }
      c.features.bands = std::move(bands);
    }
    if (f.contains("window_s")) c.features.window_s = get<double>(f, "window_s");
    if (f.contains("target_rate")) c.features.preprocess.target_rate = get<double>(f, "target_rate");
    if (f.contains("prefilter_lo")) c.features.preprocess.lo = get<double>(f, "prefilter_lo");
    if (f.contains("prefilter_hi")) c.features.preprocess.hi = get<double>(f, "prefilter_hi");
  }
  if (json.contains("model")) {
    const Json& m = json["model"];
    check_keys(m, "model", {"k", "gcn_widths", "emotion_hidden", "domain_hidden"});
    auto& mc = c.train.model;
    if (m.contains("k")) mc.pool_ratio = get<double>(m, "k");
    if (m.contains("gcn_widths")) mc.gcn_widths = get<std::vector<std::size_t>>(m, "gcn_widths");
    if (m.contains("emotion_hidden")) {
      mc.emotion_hidden = get<std::vector<std::size_t>>(m, "emotion_hidden");
    }
    if (m.contains("domain_hidden")) {
      mc.domain_hidden = get<std::vector<std::size_t>>(m, "domain_hidden");
    }
  }
  if (json.contains("train")) {
    const Json& t = json["train"];
    check_keys(t, "train", {"learning_rate", "epochs", "batch_size", "lambda_mode", "lambda",
                            "emotion_loss", "seed"});
    if (t.contains("learning_rate")) c.train.learning_rate = get<double>(t, "learning_rate");
    if (t.contains("epochs")) c.train.epochs = get<std::size_t>(t, "epochs");
    if (t.contains("batch_size")) c.train.batch_size = get<std::size_t>(t, "batch_size");
    if (t.contains("lambda_mode")) {
      c.train.lambda_mode = lambda_mode_from_string(get<std::string>(t, "lambda_mode"));
    }
    if (t.contains("lambda")) c.train.lambda = get<double>(t, "lambda");
    if (t.contains("emotion_loss")) {
      c.train.emotion_loss = emotion_loss_from_string(get<std::string>(t, "emotion_loss"));
    }
    if (t.contains("seed")) c.train.seed = get<std::uint64_t>(t, "seed");
  }
  if (json.contains("threads")) c.threads = get<std::size_t>(json, "threads");
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const LoadError& e) {
    throw ConfigError(e.what());
  }
  Json json;
  try {
    json = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(json, std::move(base));
}

void apply_seed_override(ExperimentConfig& config) {
  const char* env = std::getenv("DAGAM_SEED");
  if (!env || !*env) return;
  try {
    if (!std::isdigit(static_cast<unsigned char>(env[0]))) throw std::invalid_argument("sign");
    std::size_t used = 0;
    const unsigned long long value = std::stoull(env, &used, 10);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    config.train.seed = value;
  } catch (const std::exception&) {
    throw ConfigError(std::string("DAGAM_SEED is not an unsigned integer: ") + env);
  }
}

}  // namespace dagam
