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

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctxrec {

// Error categories. The C API maps each onto a status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
// Malformed or unreadable input data.
class InputError : public Error {
 public:
  using Error::Error;
};
// Bad configuration, unknown label or user, unsatisfiable request.
class ConfigError : public Error {
 public:
  using Error::Error;
};
// Training data that cannot support a model (single class, constant inputs).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// The six core sensors, in concatenation order.
enum class Sensor : std::uint8_t { Acc = 0, Gyro, WAcc, Loc, Aud, PS };

inline constexpr std::size_t kNumSensors = 6;
inline constexpr std::array<Sensor, kNumSensors> kAllSensors = {
    Sensor::Acc, Sensor::Gyro, Sensor::WAcc, Sensor::Loc, Sensor::Aud, Sensor::PS};
inline constexpr std::array<std::size_t, kNumSensors> kSensorDims = {26, 26, 46, 17, 26, 34};
inline constexpr std::size_t kEarlyFusionDim = 26 + 26 + 46 + 17 + 26 + 34;

constexpr std::size_t sensor_index(Sensor s) { return static_cast<std::size_t>(s); }
constexpr std::size_t sensor_dim(Sensor s) { return kSensorDims[sensor_index(s)]; }

// Short lowercase name used by the CLI and model files: acc, gyro, wacc, loc, aud, ps.
std::string_view sensor_name(Sensor s);
std::optional<Sensor> parse_sensor(std::string_view name);

enum class Unit : std::uint8_t { G, RadPerSec, MilliG, MetersPerSec2 };

inline constexpr double kStandardGravity = 9.80665;

struct TriaxialSeries {
  std::vector<double> relative_timestamps;
  std::vector<std::array<double, 3>> samples;
  Unit unit = Unit::G;
  double nominal_rate = 40.0;

  std::size_t size() const { return samples.size(); }
};

struct LocationUpdate {
  double relative_time = 0.0;
  std::optional<double> latitude;
  std::optional<double> longitude;
  std::optional<double> altitude;
  std::optional<double> speed;
  std::optional<double> vertical_accuracy;
  std::optional<double> horizontal_accuracy;
};

struct LocationSeries {
  std::vector<LocationUpdate> updates;
  // std-lat, std-lon, dlat, dlon, mean |dlat/dt|, mean |dlon/dt|
  std::optional<std::array<double, 6>> quick_features;
};

inline constexpr std::size_t kMfccCoefficients = 13;

struct AudioMfccSeries {
  std::vector<std::vector<double>> frames;
  double normalization_factor = 1.0;
};

enum class AppState : std::uint8_t { Active, Inactive, Background, Missing };
enum class BatteryPlugged : std::uint8_t { Ac, Usb, Wireless, Missing };
enum class BatteryState : std::uint8_t {
  Unknown, Unplugged, NotCharging, Discharging, Charging, Full, Missing
};
enum class InPhoneCall : std::uint8_t { False, True, Missing };
enum class RingerMode : std::uint8_t { Normal, SilentNoVibrate, SilentWithVibrate, Missing };
enum class WifiStatus : std::uint8_t { NotReachable, ViaWifi, ViaWwan, Missing };

struct PhoneStateSnapshot {
  AppState app_state = AppState::Missing;
  BatteryPlugged battery_plugged = BatteryPlugged::Missing;
  BatteryState battery_state = BatteryState::Missing;
  InPhoneCall in_phone_call = InPhoneCall::Missing;
  RingerMode ringer_mode = RingerMode::Missing;
  WifiStatus wifi_status = WifiStatus::Missing;
  int hour_of_day = 0;
};

enum class LabelValue : std::uint8_t { NotRelevant = 0, Relevant = 1, Missing = 2 };

struct LabelAssignment {
  std::string label_name;
  LabelValue value = LabelValue::Missing;

  bool operator==(const LabelAssignment&) const = default;
};

// A per-sensor feature vector. Masked entries hold NaN and must be imputed
// before any model consumes them.
class FeatureVector {
 public:
  FeatureVector() = default;
  // Throws InputError when the length does not match the sensor's dimension.
  FeatureVector(Sensor sensor, std::vector<double> values, std::vector<std::uint8_t> missing_mask);
  // All entries present.
  FeatureVector(Sensor sensor, std::vector<double> values);
  static FeatureVector fully_masked(Sensor sensor);

  Sensor sensor() const { return sensor_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<const std::uint8_t> missing_mask() const { return mask_; }
  bool is_missing(std::size_t i) const { return mask_[i] != 0; }
  bool fully_masked() const;
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  Sensor sensor_ = Sensor::Acc;
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;
};

struct SensorPayloads {
  std::optional<TriaxialSeries> acc;
  std::optional<TriaxialSeries> gyro;
  std::optional<TriaxialSeries> watch_acc;
  std::optional<LocationSeries> location;
  std::optional<AudioMfccSeries> audio;
  std::optional<PhoneStateSnapshot> phone_state;

  bool has(Sensor s) const;
};

struct Example {
  std::string user_id;
  std::int64_t timestamp = 0;
  SensorPayloads sensor_data;
  std::array<std::optional<FeatureVector>, kNumSensors> features;
  std::vector<LabelAssignment> labels;

  // A sensor counts as present when a feature vector exists with at least one
  // unmasked entry.
  bool has_features(Sensor s) const;
  bool has_all_features() const;
  const FeatureVector* feature(Sensor s) const;
  LabelValue label(std::string_view name) const;
  void set_label(std::string_view name, LabelValue value);
};

struct Violation {
  std::string field;
  std::string rule;
};

std::vector<Violation> validate_example(const Example& example);

// Examples ordered by user id then timestamp.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Example> examples, std::vector<std::string> label_vocabulary);

  std::span<const Example> examples() const { return examples_; }
  const std::vector<std::string>& label_vocabulary() const { return vocabulary_; }
  std::vector<std::string> users() const;
  bool has_user(std::string_view user) const;
  // Indices into examples() for one user, in timestamp order.
  std::span<const std::size_t> user_examples(std::string_view user) const;
  bool has_label(std::string_view label) const;
  // Indices of examples with all six sensors present.
  std::vector<std::size_t> core_subset() const;
  std::size_t count_with_sensor(Sensor s) const;

 private:
  std::vector<Example> examples_;
  std::vector<std::string> vocabulary_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_user_;
};

// Indices from `indices` whose examples have every sensor present.
std::vector<std::size_t> core_subset(std::span<const Example> examples,
                                     std::span<const std::size_t> indices);

// Maps display names such as "Lying down" or "Drive (I'm the driver)" to the
// dataset's canonical column names. Canonical names pass through unchanged.
std::string canonical_label_name(std::string_view name);

}  // namespace ctxrec
