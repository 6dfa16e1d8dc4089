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

#include "ctxrec/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

namespace ctxrec {

namespace {

constexpr std::array<std::string_view, kNumSensors> kSensorNames = {"acc", "gyro", "wacc",
                                                                    "loc", "aud", "ps"};

struct DisplayName {
  std::string_view display;
  std::string_view canonical;
};

// Display names used in result tables -> dataset label columns.
constexpr DisplayName kDisplayNames[] = {
    {"lying down", "LYING_DOWN"},
    {"sitting", "SITTING"},
    {"walking", "FIX_WALKING"},
    {"running", "FIX_RUNNING"},
    {"bicycling", "BICYCLING"},
    {"sleeping", "SLEEPING"},
    {"lab work", "LAB_WORK"},
    {"in class", "IN_CLASS"},
    {"in a meeting", "IN_A_MEETING"},
    {"at main workplace", "LOC_MAIN_WORKPLACE"},
    {"indoors", "OR_INDOORS"},
    {"outside", "OR_OUTSIDE"},
    {"in a car", "IN_A_CAR"},
    {"on a bus", "ON_A_BUS"},
    {"drive (i'm the driver)", "DRIVE_-_I_M_THE_DRIVER"},
    {"drive (i'm a passenger)", "DRIVE_-_I_M_A_PASSENGER"},
    {"at home", "LOC_HOME"},
    {"at a restaurant", "FIX_RESTAURANT"},
    {"phone in pocket", "PHONE_IN_POCKET"},
    {"exercise", "OR_EXERCISE"},
    {"cooking", "COOKING"},
    {"shopping", "SHOPPING"},
    {"strolling", "STROLLING"},
    {"drinking (alcohol)", "DRINKING__ALCOHOL_"},
    {"bathing - shower", "BATHING_-_SHOWER"},
    {"cleaning", "CLEANING"},
    {"laundry", "DOING_LAUNDRY"},
    {"washing dishes", "WASHING_DISHES"},
    {"watching tv", "WATCHING_TV"},
    {"surfing the internet", "SURFING_THE_INTERNET"},
    {"at a party", "AT_A_PARTY"},
    {"at a bar", "AT_A_BAR"},
    {"at the beach", "LOC_BEACH"},
    {"singing", "SINGING"},
    {"talking", "TALKING"},
    {"computer work", "COMPUTER_WORK"},
    {"eating", "EATING"},
    {"toilet", "TOILET"},
    {"grooming", "GROOMING"},
    {"dressing", "DRESSING"},
    {"at the gym", "AT_THE_GYM"},
    {"stairs - going up", "STAIRS_-_GOING_UP"},
    {"stairs - going down", "STAIRS_-_GOING_DOWN"},
    {"elevator", "ELEVATOR"},
    {"standing", "OR_STANDING"},
    {"at school", "AT_SCHOOL"},
    {"phone in hand", "PHONE_IN_HAND"},
    {"phone in bag", "PHONE_IN_BAG"},
    {"phone on table", "PHONE_ON_TABLE"},
    {"with co-workers", "WITH_CO-WORKERS"},
    {"with friends", "WITH_FRIENDS"},
};

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view sensor_name(Sensor s) { return kSensorNames[sensor_index(s)]; }

std::optional<Sensor> parse_sensor(std::string_view name) {
  const auto lower = to_lower(name);
  for (auto s : kAllSensors)
    if (sensor_name(s) == lower) return s;
  return std::nullopt;
}

FeatureVector::FeatureVector(Sensor sensor, std::vector<double> values,
                             std::vector<std::uint8_t> missing_mask)
    : sensor_(sensor), values_(std::move(values)), mask_(std::move(missing_mask)) {
  if (values_.size() != sensor_dim(sensor_))
    throw InputError("feature vector for " + std::string(sensor_name(sensor_)) + " has " +
                     std::to_string(values_.size()) + " entries, expected " +
                     std::to_string(sensor_dim(sensor_)));
  if (mask_.size() != values_.size())
    throw InputError("feature mask length differs from value length");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (mask_[i]) values_[i] = std::numeric_limits<double>::quiet_NaN();
    else if (!std::isfinite(values_[i])) mask_[i] = 1, values_[i] = std::numeric_limits<double>::quiet_NaN();
  }
}

FeatureVector::FeatureVector(Sensor sensor, std::vector<double> values)
    : FeatureVector(sensor, values, std::vector<std::uint8_t>(values.size(), 0)) {}

FeatureVector FeatureVector::fully_masked(Sensor sensor) {
  const auto d = sensor_dim(sensor);
  return FeatureVector(sensor, std::vector<double>(d, 0.0), std::vector<std::uint8_t>(d, 1));
}

bool FeatureVector::fully_masked() const {
  return std::all_of(mask_.begin(), mask_.end(), [](std::uint8_t m) { return m != 0; });
}

bool SensorPayloads::has(Sensor s) const {
  switch (s) {
    case Sensor::Acc: return acc.has_value();
    case Sensor::Gyro: return gyro.has_value();
    case Sensor::WAcc: return watch_acc.has_value();
    case Sensor::Loc: return location.has_value();
    case Sensor::Aud: return audio.has_value();
    case Sensor::PS: return phone_state.has_value();
  }
  return false;
}

bool Example::has_features(Sensor s) const {
  const auto& f = features[sensor_index(s)];
  return f.has_value() && !f->fully_masked();
}

bool Example::has_all_features() const {
  return std::all_of(kAllSensors.begin(), kAllSensors.end(),
                     [this](Sensor s) { return has_features(s); });
}

const FeatureVector* Example::feature(Sensor s) const {
  const auto& f = features[sensor_index(s)];
  return f ? &*f : nullptr;
}

LabelValue Example::label(std::string_view name) const {
  for (const auto& l : labels)
    if (l.label_name == name) return l.value;
  return LabelValue::Missing;
}

void Example::set_label(std::string_view name, LabelValue value) {
  for (auto& l : labels) {
    if (l.label_name == name) {
      l.value = value;
      return;
    }
  }
  labels.push_back({std::string(name), value});
}

namespace {

void check_triaxial(const TriaxialSeries& s, std::string_view field, std::initializer_list<Unit> units,
                    std::vector<Violation>& out) {
  const std::string f(field);
  if (s.samples.empty()) out.push_back({f + ".samples", "series must have at least one sample"});
  if (s.samples.size() != s.relative_timestamps.size())
    out.push_back({f + ".relative_timestamps", "timestamps and samples must have equal length"});
  if (!std::is_sorted(s.relative_timestamps.begin(), s.relative_timestamps.end()))
    out.push_back({f + ".relative_timestamps", "timestamps must be non-decreasing"});
  if (std::find(units.begin(), units.end(), s.unit) == units.end())
    out.push_back({f + ".unit", "unit does not match sensor kind"});
  if (!(s.nominal_rate > 0)) out.push_back({f + ".nominal_rate", "rate must be positive"});
}

}  // namespace

std::vector<Violation> validate_example(const Example& example) {
  std::vector<Violation> out;
  const auto& d = example.sensor_data;
  if (d.acc) check_triaxial(*d.acc, "acc", {Unit::G}, out);
  if (d.gyro) check_triaxial(*d.gyro, "gyro", {Unit::RadPerSec}, out);
  if (d.watch_acc) check_triaxial(*d.watch_acc, "watch_acc", {Unit::MilliG}, out);
  if (d.location) {
    for (std::size_t i = 0; i < d.location->updates.size(); ++i) {
      const auto& u = d.location->updates[i];
      const auto f = "location.updates[" + std::to_string(i) + "]";
      if (u.vertical_accuracy && *u.vertical_accuracy < 0)
        out.push_back({f + ".vertical_accuracy", "accuracy must be >= 0"});
      if (u.horizontal_accuracy && *u.horizontal_accuracy < 0)
        out.push_back({f + ".horizontal_accuracy", "accuracy must be >= 0"});
      if (u.latitude && std::abs(*u.latitude) > 90)
        out.push_back({f + ".latitude", "latitude must be within [-90, 90]"});
      if (u.longitude && std::abs(*u.longitude) > 180)
        out.push_back({f + ".longitude", "longitude must be within [-180, 180]"});
    }
  }
  if (d.audio) {
    if (d.audio->frames.empty()) out.push_back({"audio.frames", "at least one frame required"});
    for (std::size_t i = 0; i < d.audio->frames.size(); ++i)
      if (d.audio->frames[i].size() != kMfccCoefficients)
        out.push_back({"audio.frames[" + std::to_string(i) + "]",
                       "frame width must be exactly 13 coefficients"});
    if (!(d.audio->normalization_factor > 0))
      out.push_back({"audio.normalization_factor", "must be positive"});
  }
  if (d.phone_state) {
    const auto h = d.phone_state->hour_of_day;
    if (h < 0 || h > 23) out.push_back({"phone_state.hour_of_day", "hour must be within [0, 23]"});
  }
  for (auto s : kAllSensors) {
    const auto& f = example.features[sensor_index(s)];
    if (f && (f->sensor() != s || f->size() != sensor_dim(s)))
      out.push_back({"features." + std::string(sensor_name(s)), "feature dimension mismatch"});
  }
  std::set<std::string_view> seen;
  for (const auto& l : example.labels) {
    if (l.label_name.empty()) out.push_back({"labels", "label name must be nonempty"});
    else if (!seen.insert(l.label_name).second)
      out.push_back({"labels." + l.label_name, "label names must be unique"});
  }
  return out;
}

Dataset::Dataset(std::vector<Example> examples, std::vector<std::string> label_vocabulary)
    : examples_(std::move(examples)), vocabulary_(std::move(label_vocabulary)) {
  std::stable_sort(examples_.begin(), examples_.end(), [](const Example& a, const Example& b) {
    return std::tie(a.user_id, a.timestamp) < std::tie(b.user_id, b.timestamp);
  });
  for (std::size_t i = 0; i < examples_.size(); ++i) by_user_[examples_[i].user_id].push_back(i);
}

std::vector<std::string> Dataset::users() const {
  std::vector<std::string> out;
  out.reserve(by_user_.size());
  for (const auto& [u, _] : by_user_) out.push_back(u);
  return out;
}

bool Dataset::has_user(std::string_view user) const { return by_user_.find(user) != by_user_.end(); }

std::span<const std::size_t> Dataset::user_examples(std::string_view user) const {
  auto it = by_user_.find(user);
  if (it == by_user_.end()) return {};
  return it->second;
}

bool Dataset::has_label(std::string_view label) const {
  return std::find(vocabulary_.begin(), vocabulary_.end(), label) != vocabulary_.end();
}

std::vector<std::size_t> Dataset::core_subset() const {
  std::vector<std::size_t> all(examples_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return ctxrec::core_subset(examples_, all);
}

std::size_t Dataset::count_with_sensor(Sensor s) const {
  return static_cast<std::size_t>(std::count_if(
      examples_.begin(), examples_.end(), [s](const Example& e) { return e.has_features(s); }));
}

std::vector<std::size_t> core_subset(std::span<const Example> examples,
                                     std::span<const std::size_t> indices) {
  std::vector<std::size_t> out;
  for (auto i : indices)
    if (examples[i].has_all_features()) out.push_back(i);
  return out;
}

std::string canonical_label_name(std::string_view name) {
  if (name.starts_with("label:")) name.remove_prefix(6);
  // Already canonical: upper case, digits and punctuation only.
  const bool canonical = !name.empty() && std::none_of(name.begin(), name.end(), [](char c) {
    return c == ' ' || std::islower(static_cast<unsigned char>(c));
  });
  if (canonical) return std::string(name);
  const auto lower = to_lower(name);
  for (const auto& d : kDisplayNames)
    if (d.display == lower) return std::string(d.canonical);
  std::string out(name);
  for (auto& c : out) {
    if (c == ' ') c = '_';
    else c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace ctxrec
