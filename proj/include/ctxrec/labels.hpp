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

#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "ctxrec/types.hpp"

namespace ctxrec {

enum class AnchorKind { Home, MainWorkplace, BeachRegion };

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};

// A beach region is an axis-aligned box (south-west, north-east corners).
struct PlaceAnchor {
  std::string user_id;  // "*" applies to every user (beach regions)
  AnchorKind kind = AnchorKind::Home;
  std::vector<LatLon> centers;
  LatLon box_min;
  LatLon box_max;
};

struct AnchorSet {
  std::vector<PlaceAnchor> anchors;
};

inline constexpr double kPlaceInsideMeters = 15.0;
inline constexpr double kPlaceOutsideMeters = 100.0;

// Anchor file, one anchor per line, '#' starts a comment:
//   <user> home <lat> <lon>
//   <user> main_workplace <lat> <lon>
//   <user|*> beach_region <lat_min> <lon_min> <lat_max> <lon_max>
// Repeated home lines for a user add centers (at most two).
AnchorSet parse_anchor_file(std::istream& in);
AnchorSet load_anchor_file(const std::string& path);

// The location update with the lowest horizontal accuracy (earliest on ties),
// among updates carrying coordinates.
std::optional<LatLon> best_location_fix(const LocationSeries& series);

// Updates for AT_HOME, AT_MAIN_WORKPLACE and AT_THE_BEACH. Only labels whose
// value changes are returned.
std::vector<LabelAssignment> adjust_label_by_location(const Example& example,
                                                      const AnchorSet& anchors);

// Co-label corrections for WALKING, RUNNING, EXERCISE, INDOORS, OUTSIDE and
// AT_A_RESTAURANT. Every rule reads the original assignments. Only labels
// whose value changes are returned.
std::vector<LabelAssignment> adjust_label_by_colabels(const Example& example);

void apply_label_updates(Example& example, const std::vector<LabelAssignment>& updates);

}  // namespace ctxrec
