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

#include "dagam/report.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "dagam/errors.h"
#include "dagam/files.h"

namespace dagam {
namespace {

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::string percent(double fraction) { return fixed(100.0 * fraction, 2) + "%"; }

std::string acc_std(const Summary& s) {
  return fixed(100.0 * s.mean, 2) + "/" + fixed(100.0 * s.std, 2);
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Json to_json(const ConfusionMatrix& m) {
  Json counts = Json::array();
  Json normalized = Json::array();
  const auto norm = m.normalized();
  for (std::size_t r = 0; r < m.classes; ++r) {
    Json crow = Json::array(), nrow = Json::array();
    for (std::size_t c = 0; c < m.classes; ++c) {
      crow.push_back(m.count(r, c));
      nrow.push_back(norm[r * m.classes + c]);
    }
    counts.push_back(crow);
    normalized.push_back(nrow);
  }
  return Json{{"counts", counts}, {"normalized", normalized}};
}

ConfusionMatrix confusion_from_json(const Json& json) {
  try {
    const Json& counts = json.at("counts");
    ConfusionMatrix m(counts.size());
    for (std::size_t r = 0; r < m.classes; ++r) {
      if (counts[r].size() != m.classes) throw DataError("confusion counts are not square");
      for (std::size_t c = 0; c < m.classes; ++c) {
        m.counts[r * m.classes + c] = counts[r][c].get<std::uint64_t>();
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed confusion matrix: ") + e.what());
  }
}

Json to_json(const LoocvResult& result) {
  Json folds = Json::array();
  for (const FoldResult& f : result.folds) {
    Json history = Json::array();
    for (const EpochRecord& e : f.history) {
      history.push_back(Json{{"epoch", e.epoch},
                             {"emotion_loss", e.emotion_loss},
                             {"domain_loss", e.domain_loss},
                             {"total_loss", e.total_loss},
                             {"source_accuracy", e.source_accuracy},
                             {"lambda", e.lambda}});
    }
    folds.push_back(Json{{"target", f.target_subject},
                         {"sources", f.source_subjects},
                         {"seed", f.seed},
                         {"accuracy", f.accuracy},
                         {"confusion", to_json(f.confusion)["counts"]},
                         {"history", history}});
  }
  Json accuracies = Json::array();
  for (const FoldResult& f : result.folds) accuracies.push_back(f.accuracy);
  return Json{{"fold_accuracies", accuracies},
              {"mean", result.summary.mean},
              {"std", result.summary.std},
              {"confusion", to_json(result.confusion)},
              {"folds", folds}};
}

LoocvResult loocv_from_json(const Json& json) {
  try {
    LoocvResult r;
    r.summary.mean = json.at("mean").get<double>();
    r.summary.std = json.at("std").get<double>();
    r.confusion = confusion_from_json(json.at("confusion"));
    for (const Json& f : json.at("folds")) {
      FoldResult fold;
      fold.target_subject = f.at("target").get<std::string>();
      fold.source_subjects = f.at("sources").get<std::vector<std::string>>();
      fold.seed = f.at("seed").get<std::uint64_t>();
      fold.accuracy = f.at("accuracy").get<double>();
      fold.confusion = confusion_from_json(Json{{"counts", f.at("confusion")}});
      for (const Json& e : f.at("history")) {
        fold.history.push_back({e.at("epoch").get<std::size_t>(), e.at("emotion_loss").get<double>(),
                                e.at("domain_loss").get<double>(), e.at("total_loss").get<double>(),
                                e.at("source_accuracy").get<double>(), e.at("lambda").get<double>()});
      }
      r.folds.push_back(std::move(fold));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed cross-validation result: ") + e.what());
  }
}

Json dataset_provenance(const LoadedDataset& dataset, const std::string& path_as_given) {
  Json files = Json::array();
  for (const std::string& rel : dataset_files(dataset)) {
    files.push_back(Json{{"path", rel}, {"sha256", sha256_hex(read_file(dataset.root / rel))}});
  }
  return Json{{"path", path_as_given}, {"root", dataset.root.string()}, {"files", files}};
}

Json results_document(const std::string& command, const ExperimentConfig& config,
                      const Json& provenance, const std::vector<std::string>& classes,
                      Json payload) {
  const Json cfg = to_json(config);
  Json doc;
  doc["format"] = "dagam-results";
  doc["version"] = kResultsVersion;
  doc["command"] = command;
  doc["seed"] = config.train.seed;
  doc["config"] = cfg;
  doc["config_sha256"] = sha256_hex(cfg.dump());
  doc["dataset"] = provenance;
  doc["classes"] = classes;
  doc["metadata"] = Json{
      {"accuracy_std", "population standard deviation over folds"},
      {"domain_loss", "cross-entropy averaged within each domain, then summed"},
      {"target_domain_label", "[0, 1]"},
  };
  doc["result"] = std::move(payload);
  return doc;
}

VerifyOutcome verify_results(const Json& doc) {
  VerifyOutcome out;
  auto fail = [&out](std::string why) {
    out.ok = false;
    out.problems.push_back(std::move(why));
  };
  try {
    if (doc.at("format") != "dagam-results") fail("not a dagam results file");
    if (doc.at("version") != kResultsVersion) fail("unsupported results version");
    const Json& cfg = doc.at("config");
    if (sha256_hex(cfg.dump()) != doc.at("config_sha256").get<std::string>()) {
      fail("embedded config does not match its recorded hash");
    }
    if (cfg.at("train").at("seed") != doc.at("seed")) fail("seed differs from config seed");
    const std::filesystem::path root = doc.at("dataset").at("root").get<std::string>();
    for (const Json& f : doc.at("dataset").at("files")) {
      const std::string rel = f.at("path").get<std::string>();
      std::string digest;
      try {
        digest = sha256_hex(read_file(root / rel));
      } catch (const LoadError&) {
        fail("missing input " + (root / rel).string());
        continue;
      }
      if (digest != f.at("sha256").get<std::string>()) fail("input changed: " + rel);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("malformed results file: ") + e.what());
  }
  return out;
}

std::string loocv_table(const LoocvResult& result) {
  std::ostringstream out;
  out << pad("Subject", 12) << "ACC(%)\n";
  for (const FoldResult& f : result.folds) {
    out << pad(f.target_subject, 12) << fixed(100.0 * f.accuracy, 2) << "\n";
  }
  out << pad("ACC/STD", 12) << acc_std(result.summary) << "\n";
  return out.str();
}

std::string sweep_table(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << pad("k", 8) << pad("nodes", 8) << "ACC/STD(%)\n";
  for (const SweepRow& r : rows) {
    out << pad(fixed(r.k, 2), 8) << pad(std::to_string(r.pooled_nodes), 8)
        << acc_std(r.result.summary) << "\n";
  }
  return out.str();
}

std::string ablation_table(std::span<const AblationRow> rows) {
  std::ostringstream out;
  out << pad("Method", 42) << "ACC/STD(%)\n";
  for (const AblationRow& r : rows) out << pad(r.variant, 42) << acc_std(r.result.summary) << "\n";
  return out.str();
}

std::string confusion_table(const ConfusionMatrix& m, const std::vector<std::string>& names) {
  if (names.size() != m.classes) throw DimensionError("class names do not match the matrix");
  std::size_t width = 10;
  for (const auto& n : names) width = std::max(width, n.size() + 2);
  const auto norm = m.normalized();
  std::ostringstream out;
  out << pad("true\\pred", width);
  for (const auto& n : names) out << pad_left(n, width);
  out << "\n";
  for (std::size_t r = 0; r < m.classes; ++r) {
    out << pad(names[r], width);
    for (std::size_t c = 0; c < m.classes; ++c) {
      out << pad_left(percent(norm[r * m.classes + c]), width);
    }
    out << "\n";
  }
  return out.str();
}

std::string confusion_svg(const ConfusionMatrix& m, const std::vector<std::string>& names,
                          const std::string& title) {
  if (names.size() != m.classes) throw DimensionError("class names do not match the matrix");
  const auto norm = m.normalized();
  const int cell = 90, left = 110, top = 60;
  const int size = cell * static_cast<int>(m.classes);
  const int width = left + size + 20, height = top + size + 60;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left + size / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << xml_escape(title) << "</text>\n";
  for (std::size_t r = 0; r < m.classes; ++r) {
    for (std::size_t c = 0; c < m.classes; ++c) {
      const double p = norm[r * m.classes + c];
      // white to dark blue
      const int red = static_cast<int>(255 - p * (255 - 8));
      const int green = static_cast<int>(255 - p * (255 - 48));
      const int blue = static_cast<int>(255 - p * (255 - 107));
      const int x = left + cell * static_cast<int>(c), y = top + cell * static_cast<int>(r);
      char fill[8];
      std::snprintf(fill, sizeof fill, "#%02x%02x%02x", red, green, blue);
      svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\""
          << cell << "\" fill=\"" << fill << "\" stroke=\"#444444\"/>\n";
      svg << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 5
          << "\" text-anchor=\"middle\" font-size=\"14\" fill=\""
          << (p > 0.5 ? "white" : "black") << "\">" << percent(p) << "</text>\n";
    }
    svg << "<text x=\"" << left - 8 << "\" y=\"" << top + cell * static_cast<int>(r) + cell / 2 + 5
        << "\" text-anchor=\"end\" font-size=\"13\">" << xml_escape(names[r]) << "</text>\n";
  }
  for (std::size_t c = 0; c < m.classes; ++c) {
    svg << "<text x=\"" << left + cell * static_cast<int>(c) + cell / 2 << "\" y=\""
        << top + size + 20 << "\" text-anchor=\"middle\" font-size=\"13\">"
        << xml_escape(names[c]) << "</text>\n";
  }
  svg << "<text x=\"" << left + size / 2 << "\" y=\"" << top + size + 45
      << "\" text-anchor=\"middle\" font-size=\"13\">Predicted label</text>\n";
  svg << "<text x=\"16\" y=\"" << top + size / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " << top + size / 2
      << ")\">True label</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void emit_confusion(const ConfusionMatrix& matrix, const std::vector<std::string>& names,
                    const std::filesystem::path& svg_path, const std::string& title) {
  for (double p : matrix.normalized()) {
    if (!(p >= 0.0 && p <= 1.0)) throw ContractError("confusion proportions out of range");
  }
  std::filesystem::path txt = svg_path;
  txt.replace_extension(".txt");
  write_file_atomic(svg_path, confusion_svg(matrix, names, title));
  write_file_atomic(txt, confusion_table(matrix, names));
}

}  // namespace dagam
