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

// Synthetic data shared by the unit and acceptance tests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ctxrec/rng.hpp"
#include "ctxrec/types.hpp"

namespace ctxrec::testing {

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::vector<double> gaussian_vector(Rng& rng, std::size_t n, double mean = 0.0, double sd = 1.0);

// Random but valid raw payloads.
TriaxialSeries random_triaxial(Rng& rng, Unit unit, double rate, double seconds);
LocationSeries random_location(Rng& rng, std::size_t updates);
AudioMfccSeries random_mfcc(Rng& rng, std::size_t frames);
PhoneStateSnapshot random_phone_state(Rng& rng);

// Feature-level examples for the learning modules. Labels:
//   SITTING   shifts Acc features, prevalence ~0.4
//   AT_HOME   shifts Loc features, prevalence ~0.3
//   RUNNING   shifts WAcc features, prevalence ~0.1
// About 10% of examples lack the watch; ~5% of label cells are missing.
struct SyntheticDatasetSpec {
  std::size_t users = 8;
  std::size_t per_user = 40;
  std::uint64_t seed = 1;
  double shift = 1.5;
  double missing_watch = 0.1;
  double missing_label = 0.05;
};
inline const std::vector<std::string> kSyntheticLabels = {"SITTING", "AT_HOME", "RUNNING"};
std::string synthetic_user(std::size_t i);
Dataset synthetic_dataset(const SyntheticDatasetSpec& spec);

// Two informative sensors carrying disjoint halves of the signal: the label is
// positive when a + b > 0, a read off Acc and b off Loc; the rest is noise.
Dataset complementary_dataset(std::size_t n, std::uint64_t seed, std::size_t users = 10);

// One <user>.features_labels.csv per user.
void write_feature_dir(const std::filesystem::path& dir, const Dataset& dataset);
// "<user> iphone|android", alternating.
void write_platforms(const std::filesystem::path& file, const Dataset& dataset);

// <root>/<user>/<timestamp>/ bundle with every sensor and a labels.csv.
void write_raw_session(const std::filesystem::path& root, const std::string& user, std::int64_t timestamp,
                       std::uint64_t seed, bool sitting);

std::string read_file(const std::filesystem::path& path);

}  // namespace ctxrec::testing
