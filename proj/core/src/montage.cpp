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

#include <cmath>
#include <numbers>

#include "dagam/graph.h"

namespace dagam {
namespace {

// Electrodes are placed in an azimuthal-equidistant projection centred on Cz:
// radius is the polar angle from the vertex in degrees, azimuth is measured
// from the front toward the right ear. The 10% circumference ring sits at
// radius 72. Lateral electrodes of a row are spaced evenly between the row's
// midline electrode and its ring electrode.
struct Row {
  const char* prefix;
  double mid_radius;
  double mid_azimuth;
  double ring_azimuth;
};

constexpr Row kRows[] = {
    {"AF", 54, 0, 36},   {"F", 36, 0, 54},    {"FC", 18, 0, 72}, {"C", 0, 0, 90},
    {"CP", 18, 180, 108}, {"P", 36, 180, 126}, {"PO", 54, 180, 144},
};
constexpr double kRing = 72.0;

struct Polar {
  double radius;
  double azimuth;
};

double rad(double deg) { return deg * std::numbers::pi / 180.0; }

Polar lateral(const Row& row, int step, int side) {
  const double mx = row.mid_radius * std::sin(rad(row.mid_azimuth));
  const double my = row.mid_radius * std::cos(rad(row.mid_azimuth));
  const double ex = kRing * std::sin(rad(row.ring_azimuth));
  const double ey = kRing * std::cos(rad(row.ring_azimuth));
  const double x = side * (mx + (ex - mx) * step / 4.0);
  const double y = my + (ey - my) * step / 4.0;
  return {std::hypot(x, y), std::atan2(x, y) * 180.0 / std::numbers::pi};
}

Electrode to_sphere(const char* name, Polar p) {
  const double theta = rad(p.radius);
  const double phi = rad(p.azimuth);
  return {name, std::sin(theta) * std::sin(phi), std::sin(theta) * std::cos(phi),
          std::cos(theta)};
}

const Row& row(const char* prefix) {
  for (const Row& r : kRows) {
    if (std::string_view(r.prefix) == prefix) return r;
  }
  return kRows[0];
}

}  // namespace

ElectrodeLayout standard_62_layout() {
  struct Spec {
    const char* name;
    const char* row;  // nullptr: explicit polar position
    int step;
    int side;
    Polar polar;
  };
  const Spec specs[] = {
      {"FP1", nullptr, 0, 0, {kRing, -18}}, {"FPZ", nullptr, 0, 0, {kRing, 0}},
      {"FP2", nullptr, 0, 0, {kRing, 18}},  {"AF3", "AF", 2, -1, {}},
      {"AF4", "AF", 2, 1, {}},              {"F7", "F", 4, -1, {}},
      {"F5", "F", 3, -1, {}},               {"F3", "F", 2, -1, {}},
      {"F1", "F", 1, -1, {}},               {"FZ", "F", 0, 1, {}},
      {"F2", "F", 1, 1, {}},                {"F4", "F", 2, 1, {}},
      {"F6", "F", 3, 1, {}},                {"F8", "F", 4, 1, {}},
      {"FT7", "FC", 4, -1, {}},             {"FC5", "FC", 3, -1, {}},
      {"FC3", "FC", 2, -1, {}},             {"FC1", "FC", 1, -1, {}},
      {"FCZ", "FC", 0, 1, {}},              {"FC2", "FC", 1, 1, {}},
      {"FC4", "FC", 2, 1, {}},              {"FC6", "FC", 3, 1, {}},
      {"FT8", "FC", 4, 1, {}},              {"T7", "C", 4, -1, {}},
      {"C5", "C", 3, -1, {}},               {"C3", "C", 2, -1, {}},
      {"C1", "C", 1, -1, {}},               {"CZ", nullptr, 0, 0, {0, 0}},
      {"C2", "C", 1, 1, {}},                {"C4", "C", 2, 1, {}},
      {"C6", "C", 3, 1, {}},                {"T8", "C", 4, 1, {}},
      {"TP7", "CP", 4, -1, {}},             {"CP5", "CP", 3, -1, {}},
      {"CP3", "CP", 2, -1, {}},             {"CP1", "CP", 1, -1, {}},
      {"CPZ", "CP", 0, 1, {}},              {"CP2", "CP", 1, 1, {}},
      {"CP4", "CP", 2, 1, {}},              {"CP6", "CP", 3, 1, {}},
      {"TP8", "CP", 4, 1, {}},              {"P7", "P", 4, -1, {}},
      {"P5", "P", 3, -1, {}},               {"P3", "P", 2, -1, {}},
      {"P1", "P", 1, -1, {}},               {"PZ", "P", 0, 1, {}},
      {"P2", "P", 1, 1, {}},                {"P4", "P", 2, 1, {}},
      {"P6", "P", 3, 1, {}},                {"P8", "P", 4, 1, {}},
      {"PO7", "PO", 4, -1, {}},             {"PO5", "PO", 3, -1, {}},
      {"PO3", "PO", 2, -1, {}},             {"POZ", "PO", 0, 1, {}},
      {"PO4", "PO", 2, 1, {}},              {"PO6", "PO", 3, 1, {}},
      {"PO8", "PO", 4, 1, {}},              {"CB1", nullptr, 0, 0, {100, -155}},
      {"O1", nullptr, 0, 0, {kRing, -162}}, {"OZ", nullptr, 0, 0, {kRing, 180}},
      {"O2", nullptr, 0, 0, {kRing, 162}},  {"CB2", nullptr, 0, 0, {100, 155}},
  };
  std::vector<Electrode> channels;
  for (const Spec& s : specs) {
    const Polar p = s.row ? lateral(row(s.row), s.step, s.side) : s.polar;
    channels.push_back(to_sphere(s.name, p));
  }
  return ElectrodeLayout(std::move(channels));
}

std::vector<ChannelPair> default_global_pairs() {
  return {{"FP1", "FP2"}, {"AF3", "AF4"}, {"F5", "F6"},   {"F7", "F8"},
          {"FT7", "FT8"}, {"T7", "T8"},   {"TP7", "TP8"}, {"P7", "P8"}};
}

}  // namespace dagam
