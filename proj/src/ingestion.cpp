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

#include "ctxrec/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ctxrec/features.hpp"

namespace fs = std::filesystem;

namespace ctxrec {

namespace {

constexpr ColumnGroup kGroups[] = {
    {"raw_acc:", Sensor::Acc},
    {"proc_gyro:", Sensor::Gyro},
    {"watch_acceleration:", Sensor::WAcc},
    {"location_quick_features:", Sensor::Loc},
    {"location:", Sensor::Loc},
    {"audio_naive:", Sensor::Aud},
    {"discrete:", Sensor::PS},
};

constexpr std::string_view kMetadataPrefixes[] = {
    "raw_magnet:", "watch_heading:", "lf_measurements:", "audio_properties:", "label_source",
};

constexpr std::string_view kLabelPrefix = "label:";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void split_csv(std::string_view line, std::vector<std::string_view>& cells) {
  cells.clear();
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

bool is_missing_cell(std::string_view cell) {
  cell = trim(cell);
  return cell.empty() || cell == "nan" || cell == "NaN" || cell == "NAN" || cell == "NA";
}

std::optional<double> parse_double(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_int(std::string_view cell) {
  cell = trim(cell);
  std::int64_t v = 0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end || cell.empty()) return std::nullopt;
  return v;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw InputError(source + ":" + std::to_string(line) + ": " + what);
}

void append_double(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

bool getline_stripped(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

std::span<const ColumnGroup> feature_column_groups() { return kGroups; }
std::span<const std::string_view> known_metadata_prefixes() { return kMetadataPrefixes; }

FeatureTable parse_features_csv(std::istream& in, std::string user_id, const FeatureParseOptions& options) {
  const auto& src = options.source;
  FeatureTable table;
  table.user_id = std::move(user_id);

  std::string line;
  if (!getline_stripped(in, line)) fail(src, 1, "empty file");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  std::vector<std::string_view> cells;
  split_csv(line, cells);
  std::vector<std::string> header;
  for (auto c : cells) header.emplace_back(trim(c));
  {
    std::set<std::string_view> seen;
    for (const auto& h : header)
      if (!seen.insert(h).second) fail(src, 1, "duplicate column " + h);
  }
  if (header.empty() || lower(header[0]) != "timestamp") fail(src, 1, "first column must be timestamp");

  // Column roles.
  enum class Role { Feature, Label, Metadata };
  struct Column {
    Role role = Role::Metadata;
    Sensor sensor = Sensor::Acc;
    std::size_t slot = 0;  // position in the feature vector, label list or metadata list
  };
  std::vector<Column> columns(header.size());
  std::array<std::vector<std::size_t>, kNumSensors> group_columns;
  std::set<std::string> warned_prefixes;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const auto& h = header[c];
    if (h.rfind(kLabelPrefix, 0) == 0) {
      columns[c].role = Role::Label;
      columns[c].slot = table.label_names.size();
      table.label_names.push_back(canonical_label_name(h));
      continue;
    }
    const auto group = std::find_if(std::begin(kGroups), std::end(kGroups),
                                    [&](const ColumnGroup& g) { return h.rfind(g.prefix, 0) == 0; });
    if (group != std::end(kGroups)) {
      columns[c].role = Role::Feature;
      columns[c].sensor = group->sensor;
      group_columns[sensor_index(group->sensor)].push_back(c);
      continue;
    }
    columns[c].slot = table.metadata_columns.size();
    table.metadata_columns.push_back(h);
    const bool known = std::any_of(std::begin(kMetadataPrefixes), std::end(kMetadataPrefixes),
                                   [&](std::string_view p) { return h.rfind(p, 0) == 0; });
    if (!known) {
      const auto prefix = h.substr(0, h.find(':'));
      if (warned_prefixes.insert(prefix).second)
        table.warnings.push_back(src + ": unknown column prefix '" + prefix + "' kept as metadata");
    }
  }
  {
    std::set<std::string> seen;
    for (const auto& l : table.label_names)
      if (!seen.insert(l).second) fail(src, 1, "label " + l + " appears twice");
  }
  for (auto s : kAllSensors) {
    const auto& cols = group_columns[sensor_index(s)];
    if (cols.size() != sensor_dim(s))
      fail(src, 1, std::string(sensor_name(s)) + " group has " + std::to_string(cols.size()) +
                       " columns, expected " + std::to_string(sensor_dim(s)));
    const auto& names = feature_column_names(s);
    std::map<std::string_view, std::size_t> canonical;
    for (std::size_t j = 0; j < names.size(); ++j) canonical.emplace(names[j], j);
    const bool by_name = std::all_of(cols.begin(), cols.end(),
                                     [&](std::size_t c) { return canonical.count(header[c]) > 0; });
    if (!by_name)
      table.warnings.push_back(src + ": non-standard " + std::string(sensor_name(s)) +
                               " column names, using file order");
    for (std::size_t j = 0; j < cols.size(); ++j)
      columns[cols[j]].slot = by_name ? canonical.at(header[cols[j]]) : j;
  }

  std::unordered_set<std::int64_t> timestamps;
  std::array<std::vector<double>, kNumSensors> values;
  std::array<std::vector<std::uint8_t>, kNumSensors> masks;
  std::size_t line_no = 1;
  while (getline_stripped(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    split_csv(line, cells);
    if (cells.size() != header.size())
      fail(src, line_no, "expected " + std::to_string(header.size()) + " cells, found " +
                             std::to_string(cells.size()));
    Example e;
    e.user_id = table.user_id;
    const auto ts = parse_int(cells[0]);
    if (!ts) fail(src, line_no, "malformed timestamp '" + std::string(cells[0]) + "'");
    if (!timestamps.insert(*ts).second) fail(src, line_no, "duplicate timestamp " + std::to_string(*ts));
    e.timestamp = *ts;
    for (auto s : kAllSensors) {
      values[sensor_index(s)].assign(sensor_dim(s), 0.0);
      masks[sensor_index(s)].assign(sensor_dim(s), 0);
    }
    e.labels.resize(table.label_names.size());
    for (std::size_t l = 0; l < table.label_names.size(); ++l) e.labels[l].label_name = table.label_names[l];
    std::vector<std::string> meta;
    if (options.keep_metadata) meta.resize(table.metadata_columns.size());

    for (std::size_t c = 1; c < cells.size(); ++c) {
      const auto& col = columns[c];
      const auto cell = cells[c];
      switch (col.role) {
        case Role::Feature: {
          const auto s = sensor_index(col.sensor);
          if (is_missing_cell(cell)) {
            masks[s][col.slot] = 1;
            break;
          }
          const auto v = parse_double(cell);
          if (!v) fail(src, line_no, "malformed value '" + std::string(cell) + "' in column " + header[c]);
          values[s][col.slot] = *v;
          break;
        }
        case Role::Label: {
          auto& assignment = e.labels[col.slot];
          if (is_missing_cell(cell)) break;
          const auto v = parse_double(cell);
          if (!v || (*v != 0.0 && *v != 1.0))
            fail(src, line_no, "label cell must be 0, 1 or empty, got '" + std::string(cell) + "' in " + header[c]);
          assignment.value = *v == 1.0 ? LabelValue::Relevant : LabelValue::NotRelevant;
          break;
        }
        case Role::Metadata:
          if (options.keep_metadata) meta[col.slot] = std::string(trim(cell));
          break;
      }
    }
    for (auto s : kAllSensors)
      e.features[sensor_index(s)] =
          FeatureVector(s, std::move(values[sensor_index(s)]), std::move(masks[sensor_index(s)]));
    table.examples.push_back(std::move(e));
    if (options.keep_metadata) table.metadata.push_back(std::move(meta));
  }
  return table;
}

FeatureTable read_features_csv(const fs::path& path, const FeatureParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  auto opts = options;
  opts.source = path.string();
  auto name = path.filename().string();
  return parse_features_csv(in, name.substr(0, name.find('.')), opts);
}

void write_features_csv(std::ostream& out, const FeatureTable& table) {
  std::string line = "timestamp";
  for (auto s : kAllSensors)
    for (const auto& n : feature_column_names(s)) line += "," + n;
  for (const auto& l : table.label_names) line += "," + std::string(kLabelPrefix) + l;
  const bool meta = !table.metadata_columns.empty() && table.metadata.size() == table.examples.size();
  if (meta)
    for (const auto& m : table.metadata_columns) line += "," + m;
  out << line << '\n';
  for (std::size_t r = 0; r < table.examples.size(); ++r) {
    const auto& e = table.examples[r];
    line = std::to_string(e.timestamp);
    for (auto s : kAllSensors) {
      const auto* f = e.feature(s);
      for (std::size_t j = 0; j < sensor_dim(s); ++j) {
        line += ',';
        if (f && !f->is_missing(j)) append_double(line, (*f)[j]);
      }
    }
    for (const auto& l : table.label_names) {
      line += ',';
      switch (e.label(l)) {
        case LabelValue::Relevant: line += '1'; break;
        case LabelValue::NotRelevant: line += '0'; break;
        case LabelValue::Missing: break;
      }
    }
    if (meta)
      for (const auto& cell : table.metadata[r]) line += "," + cell;
    out << line << '\n';
  }
}

void write_features_csv(std::ostream& out, std::span<const Example> examples,
                        std::span<const std::string> label_names) {
  FeatureTable t;
  t.examples.assign(examples.begin(), examples.end());
  t.label_names.assign(label_names.begin(), label_names.end());
  write_features_csv(out, t);
}

LoadedDataset load_features_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir.string());
  LoadedDataset out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") out.files.push_back(entry.path());
  std::sort(out.files.begin(), out.files.end());
  if (out.files.empty()) throw InputError("no feature files (*.csv) in " + dir.string());

  std::vector<Example> examples;
  std::vector<std::string> vocabulary;
  std::set<std::string> users;
  FeatureParseOptions opts;
  opts.keep_metadata = false;
  for (const auto& f : out.files) {
    auto table = read_features_csv(f, opts);
    if (!users.insert(table.user_id).second) throw InputError("user " + table.user_id + " has two feature files");
    for (auto& l : table.label_names)
      if (std::find(vocabulary.begin(), vocabulary.end(), l) == vocabulary.end()) vocabulary.push_back(l);
    out.warnings.insert(out.warnings.end(), table.warnings.begin(), table.warnings.end());
    std::move(table.examples.begin(), table.examples.end(), std::back_inserter(examples));
  }
  out.dataset = Dataset(std::move(examples), std::move(vocabulary));
  return out;
}

FoldPartition parse_fold_partition(std::istream& in, const std::string& source) {
  FoldPartition p;
  std::string line;
  std::size_t line_no = 0;
  while (getline_stripped(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> fold;
    for (std::string w; words >> w;) fold.push_back(w);
    if (!fold.empty()) p.folds.push_back(std::move(fold));
  }
  if (p.folds.empty()) throw InputError(source + ": partition lists no folds");
  try {
    validate_partition(p);
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
  return p;
}

namespace {

std::vector<std::string> read_ids(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::string> ids;
  for (std::string w; in >> w;) ids.push_back(w);
  return ids;
}

}  // namespace

FoldPartition load_fold_partition(const fs::path& path) {
  if (fs::is_directory(path)) {
    FoldPartition p;
    for (std::size_t i = 0;; ++i) {
      const auto stem = "fold_" + std::to_string(i) + "_test_";
      const auto iphone = path / (stem + "iphone_uuids.txt");
      const auto android = path / (stem + "android_uuids.txt");
      if (!fs::exists(iphone) && !fs::exists(android)) break;
      std::vector<std::string> fold;
      for (const auto& f : {iphone, android})
        if (fs::exists(f)) {
          auto ids = read_ids(f);
          fold.insert(fold.end(), ids.begin(), ids.end());
        }
      p.folds.push_back(std::move(fold));
    }
    if (p.folds.empty()) throw InputError("no fold_<i>_test_*_uuids.txt files in " + path.string());
    try {
      validate_partition(p);
    } catch (const InputError& e) {
      throw InputError(path.string() + ": " + e.what());
    }
    return p;
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_fold_partition(in, path.string());
}

void write_fold_partition(std::ostream& out, const FoldPartition& partition) {
  for (const auto& fold : partition.folds) {
    for (std::size_t i = 0; i < fold.size(); ++i) out << (i ? " " : "") << fold[i];
    out << '\n';
  }
}

std::vector<UserPlatform> parse_user_platforms(std::istream& in, const std::string& source) {
  std::vector<UserPlatform> out;
  std::string line;
  std::size_t line_no = 0;
  while (getline_stripped(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string user, platform, extra;
    if (!(words >> user)) continue;
    if (!(words >> platform) || (words >> extra)) fail(source, line_no, "expected '<user> <iphone|android>'");
    const auto p = lower(platform);
    if (p == "iphone") out.push_back({user, Platform::IPhone});
    else if (p == "android") out.push_back({user, Platform::Android});
    else fail(source, line_no, "unknown platform '" + platform + "'");
  }
  return out;
}

std::vector<UserPlatform> load_user_platforms(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_user_platforms(in, path.string());
}

namespace {

using KeyValues = std::map<std::string, std::string>;

KeyValues read_key_values(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (getline_stripped(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(path.string(), line_no, "expected key = value");
    const auto key = std::string(trim(std::string_view(line).substr(0, eq)));
    if (!kv.emplace(key, std::string(trim(std::string_view(line).substr(eq + 1)))).second)
      fail(path.string(), line_no, "key " + key + " given twice");
  }
  return kv;
}

// Numeric rows of a small CSV. A first line that does not start with a number
// is treated as a header. Empty cells become NaN.
std::vector<std::vector<double>> read_numeric_rows(const fs::path& path, std::size_t width) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::vector<std::string_view> cells;
  std::size_t line_no = 0;
  while (getline_stripped(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    split_csv(line, cells);
    if (line_no == 1 && !is_missing_cell(cells[0]) && !parse_double(cells[0])) continue;
    if (width && cells.size() != width)
      fail(path.string(), line_no, "expected " + std::to_string(width) + " cells, found " + std::to_string(cells.size()));
    std::vector<double> row;
    for (auto c : cells) {
      if (is_missing_cell(c)) {
        row.push_back(std::nan(""));
        continue;
      }
      const auto v = parse_double(c);
      if (!v) fail(path.string(), line_no, "malformed value '" + std::string(c) + "'");
      row.push_back(*v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<double> opt(double v) { return std::isnan(v) ? std::nullopt : std::optional<double>(v); }

TriaxialSeries read_triaxial(const fs::path& path, Unit unit, double rate, double scale) {
  TriaxialSeries s;
  s.unit = unit;
  s.nominal_rate = rate;
  const auto rows = read_numeric_rows(path, 4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (std::any_of(r.begin(), r.end(), [](double v) { return std::isnan(v); }))
      throw InputError(path.string() + ": sample " + std::to_string(i) + " has an empty cell");
    if (i > 0 && !(r[0] > s.relative_timestamps.back()))
      throw InputError(path.string() + ": timestamps not increasing at sample " + std::to_string(i));
    s.relative_timestamps.push_back(r[0]);
    s.samples.push_back({r[1] * scale, r[2] * scale, r[3] * scale});
  }
  if (s.samples.empty()) throw InputError(path.string() + ": no samples");
  return s;
}

double rate_of(const KeyValues& kv, const std::string& key, double fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const auto v = parse_double(it->second);
  if (!v || *v <= 0) throw InputError("meta.txt: " + key + " must be a positive number");
  return *v;
}

std::string required_unit(const KeyValues& kv, const std::string& key, const fs::path& file) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw InputError(file.string() + " present but meta.txt does not declare " + key);
  return lower(it->second);
}

template <class E, std::size_t N>
E parse_enum(const KeyValues& kv, const std::string& key, const std::array<std::string_view, N>& names,
             E missing) {
  const auto it = kv.find(key);
  if (it == kv.end()) return missing;
  const auto v = lower(it->second);
  if (v.empty() || v == "missing") return missing;
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == v) return static_cast<E>(i);
  throw InputError("phone_state.txt: unknown " + key + " value '" + it->second + "'");
}

int local_hour(std::int64_t timestamp, int offset_minutes) {
  const std::int64_t local = timestamp + static_cast<std::int64_t>(offset_minutes) * 60;
  const std::int64_t day = 86400;
  return static_cast<int>((((local % day) + day) % day) / 3600);
}

}  // namespace

Example load_raw_session(const fs::path& dir, const RawSessionOptions& options) {
  if (!options.utc_offset_minutes) throw ConfigError("a UTC offset is required to derive local hours");
  const auto meta_path = dir / "meta.txt";
  if (!fs::exists(meta_path)) throw InputError("missing " + meta_path.string());
  const auto meta = read_key_values(meta_path);

  Example e;
  const auto user = meta.find("user");
  e.user_id = user != meta.end() ? user->second : dir.parent_path().filename().string();
  const auto ts = meta.find("timestamp");
  const auto ts_value = parse_int(ts != meta.end() ? ts->second : dir.filename().string());
  if (!ts_value) throw InputError(meta_path.string() + ": timestamp must be integer unix seconds");
  e.timestamp = *ts_value;
  auto& d = e.sensor_data;

  if (const auto p = dir / "acc.csv"; fs::exists(p)) {
    const auto unit = required_unit(meta, "acc_unit", p);
    double scale = 1.0;
    if (unit == "m/s^2" || unit == "m/s2") scale = 1.0 / kStandardGravity;
    else if (unit != "g") throw InputError("unit mismatch: phone acceleration must be G or m/s^2, got " + unit);
    d.acc = read_triaxial(p, Unit::G, rate_of(meta, "acc_rate", 40.0), scale);
  }
  if (const auto p = dir / "gyro.csv"; fs::exists(p)) {
    const auto unit = required_unit(meta, "gyro_unit", p);
    if (unit != "rad/s") throw InputError("unit mismatch: gyroscope must be rad/s, got " + unit);
    d.gyro = read_triaxial(p, Unit::RadPerSec, rate_of(meta, "gyro_rate", 40.0), 1.0);
  }
  if (const auto p = dir / "watch_acc.csv"; fs::exists(p)) {
    const auto unit = required_unit(meta, "watch_acc_unit", p);
    if (unit != "mg") throw InputError("unit mismatch: watch acceleration must be mG, got " + unit);
    d.watch_acc = read_triaxial(p, Unit::MilliG, rate_of(meta, "watch_acc_rate", 25.0), 1.0);
  }
  if (const auto p = dir / "location.csv"; fs::exists(p)) {
    LocationSeries loc;
    for (const auto& r : read_numeric_rows(p, 7)) {
      if (std::isnan(r[0])) throw InputError(p.string() + ": update without a time");
      if (!loc.updates.empty() && r[0] < loc.updates.back().relative_time)
        throw InputError(p.string() + ": timestamps not monotone");
      loc.updates.push_back({r[0], opt(r[1]), opt(r[2]), opt(r[3]), opt(r[4]), opt(r[5]), opt(r[6])});
    }
    if (const auto q = dir / "location_quick.csv"; fs::exists(q)) {
      const auto rows = read_numeric_rows(q, 6);
      if (rows.size() != 1) throw InputError(q.string() + ": expected one row");
      std::array<double, 6> quick{};
      std::copy(rows[0].begin(), rows[0].end(), quick.begin());
      loc.quick_features = quick;
    }
    if (loc.updates.empty()) throw InputError(p.string() + ": no location updates");
    d.location = std::move(loc);
  }
  if (const auto p = dir / "audio_mfcc.csv"; fs::exists(p)) {
    AudioMfccSeries a;
    a.frames = read_numeric_rows(p, kMfccCoefficients);
    for (const auto& f : a.frames)
      if (std::any_of(f.begin(), f.end(), [](double v) { return std::isnan(v); }))
        throw InputError(p.string() + ": empty MFCC cell");
    a.normalization_factor = rate_of(meta, "audio_normalization", 1.0);
    d.audio = std::move(a);
  } else if (const auto raw = dir / "audio_raw.csv"; fs::exists(raw)) {
    std::vector<double> samples;
    for (const auto& r : read_numeric_rows(raw, 0))
      for (double v : r) {
        if (std::isnan(v)) throw InputError(raw.string() + ": empty audio sample");
        samples.push_back(v);
      }
    double peak = 0.0;
    for (double v : samples) peak = std::max(peak, std::abs(v));
    const double factor = peak > 0 ? 1.0 / peak : 1.0;
    for (auto& v : samples) v *= factor;
    auto a = compute_mfcc(samples);
    a.normalization_factor = factor;
    d.audio = std::move(a);
  }
  if (const auto p = dir / "phone_state.txt"; fs::exists(p)) {
    const auto kv = read_key_values(p);
    static const std::set<std::string> keys = {"app_state",     "battery_plugged", "battery_state",
                                               "in_phone_call", "ringer_mode",     "wifi_status"};
    for (const auto& [k, v] : kv)
      if (!keys.count(k)) throw InputError(p.string() + ": unknown key " + k);
    PhoneStateSnapshot ps;
    ps.app_state = parse_enum(kv, "app_state", std::array<std::string_view, 3>{"active", "inactive", "background"},
                              AppState::Missing);
    ps.battery_plugged = parse_enum(kv, "battery_plugged", std::array<std::string_view, 3>{"ac", "usb", "wireless"},
                                    BatteryPlugged::Missing);
    ps.battery_state = parse_enum(
        kv, "battery_state",
        std::array<std::string_view, 6>{"unknown", "unplugged", "not_charging", "discharging", "charging", "full"},
        BatteryState::Missing);
    ps.in_phone_call =
        parse_enum(kv, "in_phone_call", std::array<std::string_view, 2>{"false", "true"}, InPhoneCall::Missing);
    ps.ringer_mode = parse_enum(
        kv, "ringer_mode", std::array<std::string_view, 3>{"normal", "silent_no_vibrate", "silent_with_vibrate"},
        RingerMode::Missing);
    ps.wifi_status = parse_enum(kv, "wifi_status",
                                std::array<std::string_view, 3>{"not_reachable", "via_wifi", "via_wwan"},
                                WifiStatus::Missing);
    ps.hour_of_day = local_hour(e.timestamp, *options.utc_offset_minutes);
    d.phone_state = ps;
  }
  if (const auto p = dir / "labels.csv"; fs::exists(p)) {
    std::ifstream in(p);
    std::string line;
    std::vector<std::string_view> cells;
    std::size_t line_no = 0;
    while (getline_stripped(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      split_csv(line, cells);
      if (cells.size() != 2) fail(p.string(), line_no, "expected '<label>,<0|1|empty>'");
      const auto name = canonical_label_name(trim(cells[0]));
      if (line_no == 1 && lower(name) == "label") continue;
      LabelValue v = LabelValue::Missing;
      const auto cell = trim(cells[1]);
      if (cell == "1") v = LabelValue::Relevant;
      else if (cell == "0") v = LabelValue::NotRelevant;
      else if (!is_missing_cell(cell)) fail(p.string(), line_no, "label value must be 0, 1 or empty");
      if (std::any_of(e.labels.begin(), e.labels.end(), [&](const auto& a) { return a.label_name == name; }))
        fail(p.string(), line_no, "label " + name + " listed twice");
      e.labels.push_back({name, v});
    }
  }

  const auto violations = validate_example(e);
  if (!violations.empty()) {
    std::string msg = dir.string() + ": invalid session:";
    for (const auto& v : violations) msg += " " + v.field + " (" + v.rule + ");";
    throw InputError(msg);
  }
  return e;
}

std::vector<fs::path> find_sessions(const fs::path& root) {
  if (!fs::is_directory(root)) throw InputError("not a directory: " + root.string());
  std::vector<fs::path> out;
  for (const auto& user : fs::directory_iterator(root)) {
    if (!user.is_directory()) continue;
    for (const auto& session : fs::directory_iterator(user.path()))
      if (session.is_directory() && fs::exists(session.path() / "meta.txt")) out.push_back(session.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t hash_files(std::span<const fs::path> files) {
  std::vector<fs::path> sorted(files.begin(), files.end());
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const char* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(data[i]);
      h *= 0x100000001b3ULL;
    }
  };
  char buf[1 << 16];
  for (const auto& f : sorted) {
    const auto name = f.filename().string();
    mix(name.data(), name.size() + 1);
    std::ifstream in(f, std::ios::binary);
    if (!in) throw InputError("cannot open " + f.string());
    while (in.read(buf, sizeof buf) || in.gcount() > 0) mix(buf, static_cast<std::size_t>(in.gcount()));
  }
  return h;
}

}  // namespace ctxrec
