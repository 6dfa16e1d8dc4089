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

#include "ctxrec/model_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace ctxrec {

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_values(std::ostream& out, const char* key, const double* v, std::size_t n) {
  out << key;
  for (std::size_t i = 0; i < n; ++i) out << ' ' << fmt(v[i]);
  out << '\n';
}

void write_linear(std::ostream& out, const FittedLinear& f) {
  const auto d = static_cast<std::size_t>(f.model.weights.size());
  out << "linear " << d << '\n';
  out << "trivial " << (f.trivial ? 1 : 0) << '\n';
  out << "standardized " << (f.standardized ? 1 : 0) << '\n';
  out << "cost " << fmt(f.model.cost) << '\n';
  out << "selected_cost " << fmt(f.selection.cost) << ' ' << (f.selection.fell_back ? 1 : 0) << '\n';
  if (f.standardized) {
    write_values(out, "means", f.standardizer.means().data(), f.standardizer.means().size());
    write_values(out, "stds", f.standardizer.stds().data(), f.standardizer.stds().size());
  }
  write_values(out, "weights", f.model.weights.data(), d);
  out << "intercept " << fmt(f.model.intercept) << '\n';
  out << "end\n";
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next non-empty line split into words; the first word must be `key`.
  std::vector<std::string> expect(std::string_view key) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::istringstream ss(line);
      std::vector<std::string> words;
      for (std::string w; ss >> w;) words.push_back(w);
      if (words.empty()) continue;
      if (words[0] != key) fail("expected '" + std::string(key) + "', found '" + words[0] + "'");
      words.erase(words.begin());
      return words;
    }
    fail("unexpected end of model, expected '" + std::string(key) + "'");
  }

  std::vector<std::string> expect(std::string_view key, std::size_t n) {
    auto w = expect(key);
    if (w.size() != n) fail("'" + std::string(key) + "' expects " + std::to_string(n) + " values");
    return w;
  }

  double number(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail("malformed number '" + s + "'");
    return v;
  }

  std::size_t count(const std::string& s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail("malformed count '" + s + "'");
    return v;
  }

  bool flag(const std::string& s) {
    if (s == "0") return false;
    if (s == "1") return true;
    fail("expected 0 or 1, found '" + s + "'");
  }

  std::vector<double> numbers(std::string_view key, std::size_t n) {
    std::vector<double> out;
    for (const auto& w : expect(key, n)) out.push_back(number(w));
    return out;
  }

  Sensor sensor(const std::string& s) {
    const auto v = parse_sensor(s);
    if (!v) fail("unknown sensor '" + s + "'");
    return *v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("model line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

FittedLinear read_linear(Reader& r, std::size_t expected_dim) {
  FittedLinear f;
  const auto d = r.count(r.expect("linear", 1)[0]);
  if (d != expected_dim) r.fail("linear layer has dimension " + std::to_string(d) + ", expected " + std::to_string(expected_dim));
  f.trivial = r.flag(r.expect("trivial", 1)[0]);
  f.standardized = r.flag(r.expect("standardized", 1)[0]);
  f.model.cost = r.number(r.expect("cost", 1)[0]);
  const auto sel = r.expect("selected_cost", 2);
  f.selection.cost = r.number(sel[0]);
  f.selection.fell_back = r.flag(sel[1]);
  if (f.standardized) {
    auto means = r.numbers("means", d);
    auto stds = r.numbers("stds", d);
    f.standardizer = Standardizer(std::move(means), std::move(stds));
  }
  const auto w = r.numbers("weights", d);
  f.model.weights = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(d));
  f.model.intercept = r.number(r.expect("intercept", 1)[0]);
  r.expect("end", 0);
  return f;
}

SingleSensorModel read_single(Reader& r, const std::string& label) {
  SingleSensorModel m;
  m.label = label;
  m.sensor = r.sensor(r.expect("sensor", 1)[0]);
  m.fit = read_linear(r, sensor_dim(m.sensor));
  return m;
}

}  // namespace

void write_model(std::ostream& out, const SingleSensorModel& model) {
  out << "ctxrec-model " << kModelFormatVersion << '\n';
  out << "kind single\n";
  out << "label " << model.label << '\n';
  out << "sensor " << sensor_name(model.sensor) << '\n';
  write_linear(out, model.fit);
}

void write_model(std::ostream& out, const FusionModel& model) {
  out << "ctxrec-model " << kModelFormatVersion << '\n';
  out << "kind " << fusion_variant_name(model.variant) << '\n';
  out << "label " << model.label << '\n';
  out << "sensors";
  for (auto s : model.sensors) out << ' ' << sensor_name(s);
  out << '\n';
  if (model.variant == FusionVariant::EarlyFusion) {
    write_linear(out, model.early);
    return;
  }
  for (const auto& c : model.components) {
    out << "component\n";
    out << "sensor " << sensor_name(c.sensor) << '\n';
    write_linear(out, c.fit);
  }
  if (model.variant == FusionVariant::LateLearned) {
    out << "second_layer\n";
    write_linear(out, model.second_layer);
  }
}

void write_model(std::ostream& out, const AnyModel& model) {
  std::visit([&](const auto& m) { write_model(out, m); }, model);
}

AnyModel read_model(std::istream& in) {
  Reader r(in);
  const auto version = r.expect("ctxrec-model", 1);
  if (version[0] != std::to_string(kModelFormatVersion)) r.fail("unsupported model format version " + version[0]);
  const auto kind = r.expect("kind", 1)[0];
  const auto label_words = r.expect("label", 1);
  const auto& label = label_words[0];
  if (kind == "single") return read_single(r, label);

  const auto variant = parse_fusion_variant(kind);
  if (!variant) r.fail("unknown model kind '" + kind + "'");
  FusionModel m;
  m.variant = *variant;
  m.label = label;
  for (const auto& s : r.expect("sensors")) m.sensors.push_back(r.sensor(s));
  if (m.sensors.empty()) r.fail("fusion model lists no sensors");
  if (m.variant == FusionVariant::EarlyFusion) {
    std::size_t d = 0;
    for (auto s : m.sensors) d += sensor_dim(s);
    m.early = read_linear(r, d);
    return m;
  }
  for (auto s : m.sensors) {
    r.expect("component", 0);
    auto c = read_single(r, label);
    if (c.sensor != s) r.fail("component order differs from the sensor list");
    m.components.push_back(std::move(c));
  }
  if (m.variant == FusionVariant::LateLearned) {
    r.expect("second_layer", 0);
    m.second_layer = read_linear(r, m.sensors.size());
  }
  return m;
}

}  // namespace ctxrec
