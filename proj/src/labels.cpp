// Copyright 2026 The ctxrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ctxrec/labels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "ctxrec/features.hpp"

namespace ctxrec {

namespace {

constexpr std::string_view kVehicles[] = {"ON_A_BUS", "IN_A_CAR", "DRIVE_-_I_M_THE_DRIVER",
                                          "DRIVE_-_I_M_A_PASSENGER", "MOTORBIKE"};

struct Rule {
  std::string_view target;
  LabelValue forced;
  std::vector<std::string_view> triggers;
};

std::vector<Rule> build_rules() {
  std::vector<std::string_view> walking(std::begin(kVehicles), std::end(kVehicles));
  walking.insert(walking.end(), {"SKATEBOARDING", "AT_THE_POOL"});
  auto running = walking;
  running.insert(running.end(), {"PLAYING_BASEBALL", "PLAYING_FRISBEE"});
  return {
      {"WALKING", LabelValue::NotRelevant, walking},
      {"RUNNING", LabelValue::NotRelevant, running},
      {"EXERCISE",
       LabelValue::Relevant,
       {"EXERCISE", "RUNNING", "BICYCLING", "LIFTING_WEIGHTS", "ELLIPTICAL_MACHINE", "TREADMILL",
        "STATIONARY_BIKE", "AT_THE_GYM"}},
      {"INDOORS",
       LabelValue::Relevant,
       {"INDOORS", "SLEEPING", "TOILET", "BATHING_-_BATH", "BATHING_-_SHOWER", "IN_CLASS",
        "AT_HOME", "AT_A_BAR", "AT_THE_GYM", "ELEVATOR"}},
      {"OUTSIDE",
       LabelValue::Relevant,
       {"OUTSIDE", "SKATEBOARDING", "PLAYING_BASEBALL", "PLAYING_FRISBEE", "GARDENING",
        "RAKING_LEAVES", "STROLLING", "HIKING", "AT_THE_BEACH", "AT_SEA", "MOTORBIKE"}},
      {"AT_A_RESTAURANT", LabelValue::NotRelevant,
       std::vector<std::string_view>(std::begin(kVehicles), std::end(kVehicles))},
  };
}

const std::vector<Rule>& colabel_rules() {
  static const auto rules = build_rules();
  return rules;
}

bool valid_coordinate(const LatLon& p) { return std::abs(p.lat) <= 90 && std::abs(p.lon) <= 180; }

}  // namespace

AnchorSet parse_anchor_file(std::istream& in) {
  AnchorSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string user, kind;
    if (!(fields >> user)) continue;
    auto fail = [&](const std::string& why) {
      throw InputError("anchor file line " + std::to_string(line_no) + ": " + why);
    };
    if (!(fields >> kind)) fail("missing anchor kind");
    std::vector<double> nums;
    double x;
    while (fields >> x) nums.push_back(x);
    if (!fields.eof()) fail("non-numeric coordinate");

    if (kind == "home" || kind == "main_workplace") {
      if (nums.size() != 2) fail("expected <lat> <lon>");
      const LatLon c{nums[0], nums[1]};
      if (!valid_coordinate(c)) fail("coordinate out of range");
      const auto k = kind == "home" ? AnchorKind::Home : AnchorKind::MainWorkplace;
      auto it = std::find_if(set.anchors.begin(), set.anchors.end(), [&](const PlaceAnchor& a) {
        return a.user_id == user && a.kind == k;
      });
      if (it == set.anchors.end()) {
        set.anchors.push_back({user, k, {c}, {}, {}});
      } else {
        const std::size_t limit = k == AnchorKind::Home ? 2 : 1;
        if (it->centers.size() >= limit) fail("too many centers for " + kind + " of " + user);
        it->centers.push_back(c);
      }
    } else if (kind == "beach_region") {
      if (nums.size() != 4) fail("expected <lat_min> <lon_min> <lat_max> <lon_max>");
      const LatLon lo{nums[0], nums[1]}, hi{nums[2], nums[3]};
      if (!valid_coordinate(lo) || !valid_coordinate(hi)) fail("coordinate out of range");
      if (lo.lat > hi.lat || lo.lon > hi.lon) fail("region corners out of order");
      set.anchors.push_back({user, AnchorKind::BeachRegion, {}, lo, hi});
    } else {
      fail("unknown anchor kind '" + kind + "'");
    }
  }
  return set;
}

AnchorSet load_anchor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open anchor file " + path);
  return parse_anchor_file(in);
}

std::optional<LatLon> best_location_fix(const LocationSeries& series) {
  std::optional<LatLon> best;
  double best_acc = 0.0;
  for (const auto& u : series.updates) {
    if (!u.latitude || !u.longitude) continue;
    const double acc = u.horizontal_accuracy.value_or(std::numeric_limits<double>::infinity());
    if (!best || acc < best_acc) {
      best = LatLon{*u.latitude, *u.longitude};
      best_acc = acc;
    }
  }
  return best;
}

std::vector<LabelAssignment> adjust_label_by_location(const Example& example,
                                                      const AnchorSet& anchors) {
  std::vector<LabelAssignment> updates;
  if (!example.sensor_data.location) return updates;
  const auto fix = best_location_fix(*example.sensor_data.location);
  if (!fix) return updates;

  auto propose = [&](std::string_view label, LabelValue v) {
    if (example.label(label) != v) updates.push_back({std::string(label), v});
  };

  for (auto [kind, label] : {std::pair{AnchorKind::Home, std::string_view("AT_HOME")},
                             std::pair{AnchorKind::MainWorkplace, std::string_view("AT_MAIN_WORKPLACE")}}) {
    const PlaceAnchor* anchor = nullptr;
    for (const auto& a : anchors.anchors)
      if (a.kind == kind && a.user_id == example.user_id) anchor = &a;
    if (!anchor || anchor->centers.empty()) continue;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& c : anchor->centers)
      nearest = std::min(nearest, haversine_meters(fix->lat, fix->lon, c.lat, c.lon));
    if (nearest <= kPlaceInsideMeters) propose(label, LabelValue::Relevant);
    else if (nearest > kPlaceOutsideMeters) propose(label, LabelValue::NotRelevant);
  }

  for (const auto& a : anchors.anchors) {
    if (a.kind != AnchorKind::BeachRegion) continue;
    if (a.user_id != "*" && a.user_id != example.user_id) continue;
    if (fix->lat >= a.box_min.lat && fix->lat <= a.box_max.lat && fix->lon >= a.box_min.lon &&
        fix->lon <= a.box_max.lon) {
      propose("AT_THE_BEACH", LabelValue::Relevant);
      break;
    }
  }
  return updates;
}

std::vector<LabelAssignment> adjust_label_by_colabels(const Example& example) {
  std::vector<LabelAssignment> updates;
  for (const auto& rule : colabel_rules()) {
    const bool triggered = std::any_of(rule.triggers.begin(), rule.triggers.end(), [&](auto t) {
      return example.label(t) == LabelValue::Relevant;
    });
    if (triggered && example.label(rule.target) != rule.forced)
      updates.push_back({std::string(rule.target), rule.forced});
  }
  return updates;
}

void apply_label_updates(Example& example, const std::vector<LabelAssignment>& updates) {
  for (const auto& u : updates) example.set_label(u.label_name, u.value);
}

}  // namespace ctxrec
