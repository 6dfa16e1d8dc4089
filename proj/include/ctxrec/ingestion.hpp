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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctxrec/evaluation.hpp"
#include "ctxrec/types.hpp"

namespace ctxrec {

// Column prefix -> sensor group. A sensor may own several prefixes.
struct ColumnGroup {
  std::string_view prefix;
  Sensor sensor;
};
std::span<const ColumnGroup> feature_column_groups();
// Prefixes of the public files that are read as opaque metadata without a warning.
std::span<const std::string_view> known_metadata_prefixes();

struct FeatureParseOptions {
  std::string source = "<stream>";  // used in error messages
  bool keep_metadata = true;
};

struct FeatureTable {
  std::string user_id;
  std::vector<Example> examples;            // file order
  std::vector<std::string> label_names;     // canonical names, file order
  std::vector<std::string> metadata_columns;
  std::vector<std::vector<std::string>> metadata;  // per example, raw cells
  std::vector<std::string> warnings;
};

// One row per example: integer unix timestamp first, then feature, label and
// metadata columns in any order. Throws InputError with the line number on
// ragged rows, malformed cells, duplicate timestamps or a sensor group whose
// width differs from the expected dimension.
FeatureTable parse_features_csv(std::istream& in, std::string user_id, const FeatureParseOptions& options = {});
// User id is the file name up to the first '.'.
FeatureTable read_features_csv(const std::filesystem::path& path, const FeatureParseOptions& options = {});

// Canonical header: timestamp, 175 feature columns, label:<name> columns,
// then metadata columns. Values use the shortest round-trip representation.
void write_features_csv(std::ostream& out, const FeatureTable& table);
void write_features_csv(std::ostream& out, std::span<const Example> examples,
                        std::span<const std::string> label_names);

struct LoadedDataset {
  Dataset dataset;
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> files;  // sorted
};

// Every *.csv file of the directory (not recursive), merged in file-name order.
LoadedDataset load_features_dir(const std::filesystem::path& dir);

// Text format: one fold per line, whitespace-separated user ids; '#' starts a
// comment. A directory holding fold_<i>_test_{iphone,android}_uuids.txt files
// is also accepted.
FoldPartition parse_fold_partition(std::istream& in, const std::string& source = "<stream>");
FoldPartition load_fold_partition(const std::filesystem::path& path);
void write_fold_partition(std::ostream& out, const FoldPartition& partition);

// "<user> <iphone|android>" per line.
std::vector<UserPlatform> parse_user_platforms(std::istream& in, const std::string& source = "<stream>");
std::vector<UserPlatform> load_user_platforms(const std::filesystem::path& path);

struct RawSessionOptions {
  // Minutes east of UTC used to derive the local hour. Required.
  std::optional<int> utc_offset_minutes;
};

// Reads <dir>/meta.txt and whatever sensor files exist in the bundle; see
// docs/formats.md. Android-style m/s^2 acceleration is converted to G.
Example load_raw_session(const std::filesystem::path& dir, const RawSessionOptions& options);

// Session directories <root>/<user>/<session>/ holding a meta.txt, sorted.
std::vector<std::filesystem::path> find_sessions(const std::filesystem::path& root);

// FNV-1a over the sorted file names and their bytes.
std::uint64_t hash_files(std::span<const std::filesystem::path> files);

}  // namespace ctxrec
