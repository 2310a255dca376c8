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

#include "dagam/synthetic.h"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "dagam/errors.h"
#include "dagam/files.h"
#include "dagam/random.h"

namespace dagam {
namespace {

std::string subject_id(std::size_t s) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "s%02zu", s + 1);
  return buf;
}

// log-variance offset per band so lower bands carry more power, as in EEG
double band_base(std::size_t band) { return -0.5 * static_cast<double>(band); }

}  // namespace

void validate(const SyntheticSpec& spec) {
  if (spec.subjects < 2) throw ConfigError("synthetic data needs at least two subjects");
  if (spec.classes < 2) throw ConfigError("synthetic data needs at least two classes");
  if (spec.channels == 0) throw ConfigError("synthetic data needs at least one channel");
  if (spec.channels > 62) {
    throw ConfigError("requested " + std::to_string(spec.channels) +
                      " channels but the montage has 62");
  }
  if (!(spec.separation > 0.0)) throw ConfigError("class separation must be positive");
  if (!(spec.shift >= 0.0)) throw ConfigError("subject shift must be non-negative");
  if (!(spec.rate > 0.0) || !(spec.trial_seconds > 0.0)) {
    throw ConfigError("rate and trial length must be positive");
  }
  if (spec.trials_per_class == 0) throw ConfigError("need at least one trial per class");
  if (spec.bands.empty()) throw ConfigError("need at least one band");
  for (const Band& b : spec.bands) {
    if (!(b.lo >= 0.0 && b.lo < b.hi && b.hi <= spec.rate / 2.0)) {
      throw ConfigError("band " + b.name + " is not inside [0, Nyquist]");
    }
  }
}

Json to_json(const SyntheticSpec& spec) {
  Json j;
  j["subjects"] = spec.subjects;
  j["classes"] = spec.classes;
  j["channels"] = spec.channels;
  j["separation"] = spec.separation;
  j["shift"] = spec.shift;
  j["seed"] = spec.seed;
  j["rate"] = spec.rate;
  j["trial_seconds"] = spec.trial_seconds;
  j["trials_per_class"] = spec.trials_per_class;
  Json bands = Json::array();
  for (const Band& b : spec.bands) bands.push_back(Json{{"name", b.name}, {"lo", b.lo}, {"hi", b.hi}});
  j["bands"] = bands;
  return j;
}

SyntheticSpec synthetic_spec_from_json(const Json& json, SyntheticSpec spec) {
  if (!json.is_object()) throw ConfigError("synthetic spec must be a JSON object");
  try {
    for (const auto& [key, value] : json.items()) {
      if (value.is_number_integer() && !value.is_number_unsigned() && value.get<std::int64_t>() < 0 &&
          key != "separation" && key != "shift") {
        throw ConfigError("synthetic spec key '" + key + "' must be >= 0");
      }
      if (key == "subjects") spec.subjects = value.get<std::size_t>();
      else if (key == "classes") spec.classes = value.get<std::size_t>();
      else if (key == "channels") spec.channels = value.get<std::size_t>();
      else if (key == "separation") spec.separation = value.get<double>();
      else if (key == "shift") spec.shift = value.get<double>();
      else if (key == "seed") spec.seed = value.get<std::uint64_t>();
      else if (key == "rate") spec.rate = value.get<double>();
      else if (key == "trial_seconds") spec.trial_seconds = value.get<double>();
      else if (key == "trials_per_class") spec.trials_per_class = value.get<std::size_t>();
      else if (key == "bands") {
        spec.bands.clear();
        for (const Json& b : value) {
          spec.bands.push_back(
              {b.at("name").get<std::string>(), b.at("lo").get<double>(), b.at("hi").get<double>()});
        }
      } else {
        throw ConfigError("unknown synthetic spec key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed synthetic spec: ") + e.what());
  }
  return spec;
}

std::vector<std::string> synthetic_class_names(std::size_t classes) {
  if (classes == 3) return {"negative", "neutral", "positive"};
  if (classes == 4) return {"neutral", "sad", "fear", "happy"};
  std::vector<std::string> names;
  for (std::size_t c = 0; c < classes; ++c) names.push_back("class" + std::to_string(c));
  return names;
}

SyntheticData synthesize(const SyntheticSpec& spec) {
  validate(spec);
  SyntheticData out;
  out.layout = standard_62_layout().prefix(spec.channels);
  const std::size_t n = spec.channels, nb = spec.bands.size();
  const auto samples = static_cast<std::size_t>(std::llround(spec.trial_seconds * spec.rate));

  // Each class pattern and subject drift is a band profile shared by all
  // channels plus per-channel variation, both unit-variance normal overall.
  Rng pattern_rng(spec.seed);
  auto field = [&](std::size_t groups) {
    std::vector<double> profile(groups * nb), out(groups * n * nb);
    for (double& v : profile) v = pattern_rng.normal();
    for (std::size_t g = 0; g < groups; ++g) {
      for (std::size_t ch = 0; ch < n; ++ch) {
        for (std::size_t b = 0; b < nb; ++b) {
          out[(g * n + ch) * nb + b] =
              std::numbers::sqrt2 / 2.0 * (profile[g * nb + b] + pattern_rng.normal());
        }
      }
    }
    return out;
  };
  const std::vector<double> class_pattern = field(spec.classes);
  const std::vector<double> drift = field(spec.subjects);

  auto& m = out.manifest;
  m.kind = "recordings";
  m.classes = synthetic_class_names(spec.classes);
  m.rate = spec.rate;
  m.bands = spec.bands;
  m.window_s = 1.0;

  Rng noise_rng(spec.seed ^ 0x5eed5eed5eed5eedULL);
  for (std::size_t s = 0; s < spec.subjects; ++s) {
    SubjectEntry subject{subject_id(s), {}};
    int trial = 0;
    for (std::size_t rep = 0; rep < spec.trials_per_class; ++rep) {
      for (std::size_t c = 0; c < spec.classes; ++c, ++trial) {
        Recording rec;
        rec.samples = Matrix(n, samples);
        rec.rate = spec.rate;
        rec.subject = subject.id;
        rec.trial = trial;
        rec.label = static_cast<int>(c);
        for (std::size_t ch = 0; ch < n; ++ch) {
          for (std::size_t b = 0; b < nb; ++b) {
            std::vector<double> white(samples);
            for (double& v : white) v = noise_rng.normal();
            std::vector<double> band =
                band_isolate(white, spec.bands[b].lo, spec.bands[b].hi, spec.rate);
            double power = 0.0;
            for (double v : band) power += v * v;
            power /= static_cast<double>(samples);
            const double log_var = band_base(b) +
                                   spec.separation * class_pattern[(c * n + ch) * nb + b] +
                                   spec.shift * drift[(s * n + ch) * nb + b];
            const double gain = power > 0.0 ? std::exp(0.5 * log_var) / std::sqrt(power) : 0.0;
            for (std::size_t t = 0; t < samples; ++t) rec.samples(ch, t) += gain * band[t];
          }
        }
        char file[64];
        std::snprintf(file, sizeof file, "%s/trial_%02d.csv", subject.id.c_str(), trial);
        subject.recordings.push_back({file, trial, rec.label});
        out.recordings.push_back(std::move(rec));
      }
    }
    m.subjects.push_back(std::move(subject));
  }
  return out;
}

void generate_synthetic(const SyntheticSpec& spec, const std::filesystem::path& dir) {
  const SyntheticData data = synthesize(spec);
  write_layout_csv(data.layout, dir / data.manifest.layout_file);
  std::size_t k = 0;
  for (const auto& subject : data.manifest.subjects) {
    for (const auto& ref : subject.recordings) {
      write_recording_csv(data.recordings[k++], data.layout, dir / ref.file);
    }
  }
  Json manifest = to_json(data.manifest);
  manifest["generator"] = to_json(spec);
  write_file_atomic(dir / kManifestName, manifest.dump(2) + "\n");
}

}  // namespace dagam
