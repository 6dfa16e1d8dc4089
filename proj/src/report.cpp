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

#include "ctxrec/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace ctxrec {

std::string format_score(std::optional<double> v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

namespace {

std::string format_cost(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", c);
  return buf;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::optional<double> mean(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_cell(cells[i]);
    out << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

std::string to_csv(const Table& table) {
  std::ostringstream ss;
  write_csv(ss, table);
  return ss.str();
}

std::string render_markdown(const Table& table) {
  std::vector<std::size_t> width(table.header.size(), 3);
  auto measure = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i) width[i] = std::max(width[i], cells[i].size());
  };
  measure(table.header);
  for (const auto& r : table.rows) measure(r);
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    out += '|';
    for (std::size_t i = 0; i < width.size(); ++i) {
      const auto& c = i < cells.size() ? cells[i] : std::string();
      out += ' ' + c + std::string(width[i] - c.size(), ' ') + " |";
    }
    out += '\n';
  };
  line(table.header);
  out += '|';
  for (auto w : width) out += std::string(w + 2, '-') + '|';
  out += '\n';
  for (const auto& r : table.rows) line(r);
  return out;
}

Table evaluation_table(const EvaluationResult& result, Metric metric) {
  Table t;
  t.name = "results";
  t.header = {"label", "n_e", "n_s", "p99"};
  for (auto s : result.config.systems) t.header.emplace_back(system_name(s));
  for (std::size_t l = 0; l < result.labels.size(); ++l) {
    const auto& le = result.labels[l];
    std::vector<std::string> row = {le.label, std::to_string(le.n_e), std::to_string(le.n_s),
                                    format_score(le.p99.get(metric))};
    for (std::size_t k = 0; k < result.config.systems.size(); ++k)
      row.push_back(format_score(metric_value(result.report(l, k), metric)));
    t.rows.push_back(std::move(row));
  }
  for (bool defined_only : {false, true}) {
    std::vector<std::string> row = {defined_only ? "average_defined" : "average", "", "",
                                    format_score(result.average_p99(metric, defined_only))};
    for (std::size_t k = 0; k < result.config.systems.size(); ++k)
      row.push_back(format_score(result.average(k, metric, defined_only)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cost_table(const std::vector<CostChoice>& costs) {
  Table t;
  t.name = "costs";
  t.header = {"fold", "label", "component", "cost", "fell_back", "trivial"};
  for (const auto& c : costs)
    t.rows.push_back({std::to_string(c.fold), c.label, c.component, format_cost(c.cost),
                      c.fell_back ? "1" : "0", c.trivial ? "1" : "0"});
  return t;
}

Table learned_weights_table(const EvaluationResult& result) {
  Table t;
  t.name = "lfl_weights";
  t.header = {"fold", "label"};
  for (auto s : kAllSensors) t.header.emplace_back(sensor_name(s));
  t.header.push_back("intercept");
  for (const auto& w : result.learned_weights) {
    std::vector<std::string> row = {std::to_string(w.fold), w.label};
    for (double v : w.weights) row.push_back(format_score(v));
    row.resize(2 + kAllSensors.size());
    row.push_back(format_score(w.intercept));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table personalization_table(const PersonalizationResult& result, std::uint64_t threshold) {
  Table t;
  t.name = "personalization";
  t.header = {"label",         "n_user",         "n_adaptation_pos", "individual_trivial",
              "universal_ba",  "individual_ba",  "adapted_ba",       "universal_f1",
              "individual_f1", "adapted_f1"};
  std::array<std::vector<double>, 6> all, many;
  for (const auto& r : result.labels) {
    const MetricReport reports[] = {r.universal_report(), r.individual_report(), r.adapted_report()};
    std::vector<std::string> row = {r.label, std::to_string(r.user_positives),
                                    std::to_string(r.adaptation_positives), r.individual_trivial ? "1" : "0"};
    for (std::size_t m = 0; m < 3; ++m) {
      const auto ba = reports[m].balanced_accuracy;
      row.push_back(format_score(ba));
      if (ba) {
        all[m].push_back(*ba);
        if (r.user_positives >= threshold) many[m].push_back(*ba);
      }
    }
    for (std::size_t m = 0; m < 3; ++m) {
      row.push_back(format_score(reports[m].f1));
      all[3 + m].push_back(reports[m].f1);
      if (r.user_positives >= threshold) many[3 + m].push_back(reports[m].f1);
    }
    t.rows.push_back(std::move(row));
  }
  auto summary = [&](std::string name, const std::array<std::vector<double>, 6>& v) {
    std::vector<std::string> row = {std::move(name), "", "", ""};
    for (const auto& col : v) row.push_back(format_score(mean(col)));
    t.rows.push_back(std::move(row));
  };
  summary("average", all);
  summary("average_n_user>=" + std::to_string(threshold), many);
  return t;
}

Table confusion_table(const ConfusionMatrix& matrix) {
  Table t;
  t.name = "confusion";
  t.header = {"truth", "n"};
  for (const auto& c : matrix.classes) t.header.push_back(c);
  for (std::size_t i = 0; i < matrix.classes.size(); ++i) {
    std::uint64_t n = 0;
    for (auto c : matrix.counts[i]) n += c;
    std::vector<std::string> row = {matrix.classes[i], std::to_string(n)};
    for (std::size_t j = 0; j < matrix.classes.size(); ++j)
      row.push_back(matrix.rows[i] ? format_score((*matrix.rows[i])[j]) : "");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace ctxrec
