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

#include "dagam/dataset.h"

#include <algorithm>
#include <map>
#include <set>

#include "dagam/errors.h"
#include "dagam/files.h"

namespace dagam {

namespace fs = std::filesystem;

namespace {

template <typename T>
T field(const Json& json, const char* key, const fs::path& origin) {
  try {
    return json.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(origin.string() + ": manifest key '" + key + "': " + e.what());
  }
}

std::string feature_column(const std::string& channel, const Band& band) {
  return channel + "/" + band.name;
}

}  // namespace

Json to_json(const DatasetManifest& m) {
  Json out;
  out["format"] = "dagam-dataset";
  out["version"] = m.version;
  out["kind"] = m.kind;
  out["layout"] = m.layout_file;
  out["classes"] = m.classes;
  out["rate"] = m.rate;
  Json bands = Json::array();
  for (const Band& b : m.bands) bands.push_back(Json{{"name", b.name}, {"lo", b.lo}, {"hi", b.hi}});
  out["features"] = Json{{"bands", bands}, {"window_s", m.window_s}};
  if (m.kind == "features") out["file"] = m.features_file;
  Json subjects = Json::array();
  for (const SubjectEntry& s : m.subjects) {
    Json entry;
    entry["id"] = s.id;
    if (m.kind == "recordings") {
      Json recs = Json::array();
      for (const RecordingRef& r : s.recordings) {
        recs.push_back(Json{{"file", r.file}, {"trial", r.trial}, {"label", r.label}});
      }
      entry["recordings"] = recs;
    }
    subjects.push_back(entry);
  }
  out["subjects"] = subjects;
  return out;
}

DatasetManifest manifest_from_json(const Json& json, const fs::path& origin) {
  DatasetManifest m;
  m.version = field<int>(json, "version", origin);
  if (m.version != kManifestVersion) {
    throw LoadError(origin.string() + ": unsupported manifest version " +
                    std::to_string(m.version));
  }
  m.kind = field<std::string>(json, "kind", origin);
  if (m.kind != "recordings" && m.kind != "features") {
    throw LoadError(origin.string() + ": unknown dataset kind '" + m.kind + "'");
  }
  m.layout_file = field<std::string>(json, "layout", origin);
  m.classes = field<std::vector<std::string>>(json, "classes", origin);
  if (m.classes.size() < 2) throw LoadError(origin.string() + ": need at least two classes");
  m.rate = field<double>(json, "rate", origin);
  if (!(m.rate > 0.0)) throw LoadError(origin.string() + ": rate must be positive");
  const Json features = field<Json>(json, "features", origin);
  m.bands.clear();
  for (const Json& b : field<Json>(features, "bands", origin)) {
    m.bands.push_back({field<std::string>(b, "name", origin), field<double>(b, "lo", origin),
                       field<double>(b, "hi", origin)});
  }
  m.window_s = field<double>(features, "window_s", origin);
  if (m.kind == "features") m.features_file = field<std::string>(json, "file", origin);
  std::set<std::string> ids;
  for (const Json& s : field<Json>(json, "subjects", origin)) {
    SubjectEntry entry;
    entry.id = field<std::string>(s, "id", origin);
    if (!ids.insert(entry.id).second) {
      throw LoadError(origin.string() + ": duplicate subject '" + entry.id + "'");
    }
    if (m.kind == "recordings") {
      for (const Json& r : field<Json>(s, "recordings", origin)) {
        RecordingRef ref{field<std::string>(r, "file", origin), field<int>(r, "trial", origin),
                         field<int>(r, "label", origin)};
        if (ref.label < 0 || static_cast<std::size_t>(ref.label) >= m.classes.size()) {
          throw LoadError(origin.string() + ": label " + std::to_string(ref.label) + " of " +
                          ref.file + " outside [0, " + std::to_string(m.classes.size()) + ")");
        }
        entry.recordings.push_back(std::move(ref));
      }
    }
    m.subjects.push_back(std::move(entry));
  }
  return m;
}

Recording read_recording_csv(const fs::path& path, const ElectrodeLayout& layout) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw LoadError(path.string() + ":1: empty recording file");
  const auto header = split_fields(lines[0]);
  const auto names = layout.names();
  if (header.size() != names.size()) {
    throw LoadError(path.string() + ":1: expected " + std::to_string(names.size()) +
                    " channel columns, got " + std::to_string(header.size()));
  }
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (header[c] != names[c]) {
      throw LoadError(path.string() + ":1: column " + std::to_string(c + 1) + " is '" +
                      std::string(header[c]) + "', layout expects '" + names[c] + "'");
    }
  }
  std::size_t rows = 0;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (!lines[n].empty()) ++rows;
  }
  Recording rec;
  rec.samples = Matrix(names.size(), rows);
  std::size_t t = 0;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto fields = split_fields(lines[n]);
    if (fields.size() != names.size()) {
      throw LoadError(path.string() + ":" + std::to_string(n + 1) + ": expected " +
                      std::to_string(names.size()) + " columns, got " +
                      std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      rec.samples(c, t) = parse_double(fields[c], path, n + 1);
    }
    ++t;
  }
  return rec;
}

void write_recording_csv(const Recording& rec, const ElectrodeLayout& layout,
                         const fs::path& path) {
  if (rec.samples.rows != layout.size()) {
    throw DimensionError("recording has " + std::to_string(rec.samples.rows) +
                         " channels, layout has " + std::to_string(layout.size()));
  }
  std::string out;
  out.reserve(rec.samples.values.size() * 20 + 512);
  const auto names = layout.names();
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c) out += ',';
    out += names[c];
  }
  out += '\n';
  for (std::size_t t = 0; t < rec.samples.cols; ++t) {
    for (std::size_t c = 0; c < rec.samples.rows; ++c) {
      if (c) out += ',';
      out += format_double(rec.samples(c, t));
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

namespace {

FeatureDataset read_features_csv(const fs::path& path, const DatasetManifest& manifest,
                                 const ElectrodeLayout& layout) {
  FeatureDataset ds;
  ds.layout = layout;
  ds.class_names = manifest.classes;
  ds.bands = manifest.bands;
  ds.window_s = manifest.window_s;
  for (const SubjectEntry& s : manifest.subjects) ds.subject_ids.push_back(s.id);
  const std::set<std::string> known(ds.subject_ids.begin(), ds.subject_ids.end());

  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  const std::size_t n = layout.size(), f = manifest.bands.size();
  const std::size_t columns = 4 + n * f;
  if (lines.empty()) throw LoadError(path.string() + ":1: empty feature file");
  const auto header = split_fields(lines[0]);
  if (header.size() != columns) {
    throw LoadError(path.string() + ":1: expected " + std::to_string(columns) +
                    " columns, got " + std::to_string(header.size()));
  }
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t b = 0; b < f; ++b) {
      const std::string expect = feature_column(layout[c].name, manifest.bands[b]);
      if (header[4 + c * f + b] != expect) {
        throw LoadError(path.string() + ":1: column '" + std::string(header[4 + c * f + b]) +
                        "', expected '" + expect + "'");
      }
    }
  }
  for (std::size_t line = 1; line < lines.size(); ++line) {
    if (lines[line].empty()) continue;
    const auto fields = split_fields(lines[line]);
    const std::string where = path.string() + ":" + std::to_string(line + 1);
    if (fields.size() != columns) {
      throw LoadError(where + ": expected " + std::to_string(columns) + " columns, got " +
                      std::to_string(fields.size()));
    }
    FeatureSample s;
    s.subject = std::string(fields[0]);
    if (!known.count(s.subject)) throw LoadError(where + ": unknown subject '" + s.subject + "'");
    s.trial = static_cast<int>(parse_double(fields[1], path, line + 1));
    s.window = static_cast<int>(parse_double(fields[2], path, line + 1));
    s.label = static_cast<int>(parse_double(fields[3], path, line + 1));
    if (s.label < 0 || static_cast<std::size_t>(s.label) >= ds.classes()) {
      throw LoadError(where + ": label " + std::to_string(s.label) + " out of range");
    }
    s.features = Matrix(n, f);
    for (std::size_t k = 0; k < n * f; ++k) {
      s.features.values[k] = parse_double(fields[4 + k], path, line + 1);
    }
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

}  // namespace

LoadedDataset load_dataset(const fs::path& path) {
  const fs::path manifest_path = fs::is_directory(path) ? path / kManifestName : path;
  if (!fs::exists(manifest_path)) throw LoadError(manifest_path.string() + ": no such file");
  LoadedDataset ds;
  ds.root = manifest_path.parent_path();
  Json json;
  try {
    json = Json::parse(read_file(manifest_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError(manifest_path.string() + ": " + e.what());
  }
  ds.manifest = manifest_from_json(json, manifest_path);
  const fs::path layout_path = ds.root / ds.manifest.layout_file;
  if (!fs::exists(layout_path)) throw LoadError(layout_path.string() + ": no such file");
  ds.layout = read_layout_csv(layout_path);

  if (ds.manifest.kind == "features") {
    const fs::path file = ds.root / ds.manifest.features_file;
    if (!fs::exists(file)) throw LoadError(file.string() + ": no such file");
    ds.features = read_features_csv(file, ds.manifest, ds.layout);
    return ds;
  }
  for (const SubjectEntry& s : ds.manifest.subjects) {
    for (const RecordingRef& r : s.recordings) {
      const fs::path file = ds.root / r.file;
      if (!fs::exists(file)) throw LoadError(file.string() + ": no such file");
      Recording rec = read_recording_csv(file, ds.layout);
      rec.rate = ds.manifest.rate;
      rec.subject = s.id;
      rec.trial = r.trial;
      rec.label = r.label;
      ds.recordings.push_back(std::move(rec));
    }
  }
  return ds;
}

FeatureDataset compute_features(const std::vector<Recording>& recordings,
                                const DatasetManifest& manifest, const ElectrodeLayout& layout,
                                const FeatureConfig& config) {
  FeatureDataset ds;
  ds.layout = layout;
  ds.class_names = manifest.classes;
  ds.bands = config.bands;
  ds.window_s = config.window_s;
  for (const SubjectEntry& s : manifest.subjects) ds.subject_ids.push_back(s.id);
  for (const Recording& rec : recordings) {
    const Recording clean = preprocess(rec, config.preprocess);
    auto samples = extract_features(clean, config.bands, config.window_s);
    for (auto& s : samples) ds.samples.push_back(std::move(s));
  }
  return ds;
}

FeatureDataset to_feature_dataset(const LoadedDataset& dataset, const FeatureConfig& config) {
  if (dataset.features) return *dataset.features;
  return compute_features(dataset.recordings, dataset.manifest, dataset.layout, config);
}

void write_feature_dataset(const FeatureDataset& ds, const fs::path& dir) {
  DatasetManifest m;
  m.kind = "features";
  m.classes = ds.class_names;
  m.bands = ds.bands;
  m.window_s = ds.window_s;
  m.features_file = "features.csv";
  for (const std::string& id : ds.subject_ids) m.subjects.push_back({id, {}});
  write_layout_csv(ds.layout, dir / m.layout_file);

  const std::size_t n = ds.layout.size(), f = ds.bands.size();
  std::string out;
  out += "subject,trial,window,label";
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t b = 0; b < f; ++b) out += "," + feature_column(ds.layout[c].name, ds.bands[b]);
  }
  out += '\n';
  for (const FeatureSample& s : ds.samples) {
    if (s.features.rows != n || s.features.cols != f) {
      throw DimensionError("feature sample does not match layout and bands");
    }
    out += s.subject + "," + std::to_string(s.trial) + "," + std::to_string(s.window) + "," +
           std::to_string(s.label);
    for (double v : s.features.values) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  write_file_atomic(dir / m.features_file, out);
  write_file_atomic(dir / kManifestName, to_json(m).dump(2) + "\n");
}

std::vector<std::string> dataset_files(const LoadedDataset& ds) {
  std::vector<std::string> files{kManifestName, ds.manifest.layout_file};
  if (ds.manifest.kind == "features") {
    files.push_back(ds.manifest.features_file);
  } else {
    for (const auto& s : ds.manifest.subjects) {
      for (const auto& r : s.recordings) files.push_back(r.file);
    }
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  return files;
}

}  // namespace dagam
