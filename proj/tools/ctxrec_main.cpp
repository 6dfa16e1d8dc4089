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

// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ctxrec/ctxrec.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kInput = 2, kConfig = 3, kInternal = 4 };

// Carries an exit code out of a subcommand.
struct Failure {
  int code;
  std::string message;
};

int exit_code(ctxrec_status s) {
  switch (s) {
    case CTXREC_OK: return kOk;
    case CTXREC_ERR_INPUT: return kInput;
    case CTXREC_ERR_CONFIG:
    case CTXREC_ERR_DEGENERATE: return kConfig;
    default: return kInternal;
  }
}

void check(ctxrec_status s) {
  if (s != CTXREC_OK) throw Failure{exit_code(s), ctxrec_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using DatasetPtr = std::unique_ptr<ctxrec_dataset, Deleter<ctxrec_dataset, ctxrec_dataset_free>>;
using PartitionPtr = std::unique_ptr<ctxrec_partition, Deleter<ctxrec_partition, ctxrec_partition_free>>;
using ReportPtr = std::unique_ptr<ctxrec_report, Deleter<ctxrec_report, ctxrec_report_free>>;
using ModelPtr = std::unique_ptr<ctxrec_model, Deleter<ctxrec_model, ctxrec_model_free>>;

// Option values of one subcommand, keyed by long flag name. Everything is
// kept as text so the manifest can replay the exact invocation.
using Settings = std::map<std::string, std::string>;

struct Command {
  CLI::App* app = nullptr;
  Settings values;
  std::vector<std::string> flags;  // boolean options
};

CLI::Option* add(Command& c, const std::string& name, const std::string& help, const std::string& fallback = "") {
  c.values[name] = fallback;
  auto* opt = c.app->add_option("--" + name, c.values[name], help);
  std::string env = "CTXREC_";
  for (char ch : name) env += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  opt->envname(env);
  if (!fallback.empty()) opt->capture_default_str();
  return opt;
}

void add_flag(Command& c, const std::string& name, const std::string& help) {
  c.values[name] = "";
  c.flags.push_back(name);
  c.app->add_flag_callback("--" + name, [&c, name] { c.values[name] = "1"; }, help);
}

const std::string& need(const Settings& s, const std::string& name) {
  const auto& v = s.at(name);
  if (v.empty()) throw Failure{kConfig, "--" + name + " is required"};
  return v;
}

std::uint64_t to_u64(const Settings& s, const std::string& name) {
  const auto& v = s.at(name);
  try {
    std::size_t pos = 0;
    const auto x = std::stoull(v, &pos);
    if (pos != v.size() || v.front() == '-') throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Failure{kConfig, "--" + name + " expects a non-negative integer, got '" + v + "'"};
  }
}

double to_double(const Settings& s, const std::string& name) {
  const auto& v = s.at(name);
  try {
    std::size_t pos = 0;
    const auto x = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Failure{kConfig, "--" + name + " expects a number, got '" + v + "'"};
  }
}

// A readable file lists one label per line ('#' comments allowed); anything
// else is taken as a comma-separated list.
std::vector<std::string> read_label_list(const std::string& spec) {
  std::vector<std::string> raw;
  if (fs::is_regular_file(spec)) {
    std::ifstream in(spec);
    if (!in) throw Failure{kInput, "cannot read " + spec};
    for (std::string line; std::getline(in, line);) {
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
      while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.erase(0, 1);
      if (!line.empty()) raw.push_back(line);
    }
  } else {
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) raw.push_back(item);
  }
  std::vector<std::string> out;
  for (const auto& r : raw) {
    std::string name = ctxrec_canonical_label(r.c_str());
    if (std::find(out.begin(), out.end(), name) != out.end()) throw Failure{kConfig, "label listed twice: " + name};
    out.push_back(std::move(name));
  }
  if (out.empty()) throw Failure{kConfig, "label list is empty"};
  return out;
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

DatasetPtr load_dataset(const std::string& dir) {
  ctxrec_dataset* d = nullptr;
  check(ctxrec_dataset_load(dir.c_str(), &d));
  DatasetPtr ptr(d);
  for (size_t i = 0; i < ctxrec_dataset_warning_count(d); ++i)
    std::cerr << "warning: " << ctxrec_dataset_warning(d, i) << '\n';
  return ptr;
}

PartitionPtr load_partition(const std::string& path) {
  if (path.empty()) return nullptr;
  ctxrec_partition* p = nullptr;
  check(ctxrec_partition_load(path.c_str(), &p));
  return PartitionPtr(p);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Failure{kInput, "cannot write " + path.string()};
}

// Every table as <out>/<name>.csv (and .md), plus the manifest.
void write_outputs(const ctxrec_report* report, const fs::path& out, bool markdown, const json& manifest) {
  fs::create_directories(out);
  for (size_t t = 0; t < ctxrec_report_table_count(report); ++t) {
    const std::string name = ctxrec_report_table_name(report, t);
    write_text(out / (name + ".csv"), ctxrec_report_csv(report, t));
    if (markdown) write_text(out / (name + ".md"), ctxrec_report_markdown(report, t));
  }
  write_text(out / "manifest.json", manifest.dump(2) + "\n");
}

json make_manifest(const std::string& command, const Settings& settings, const ctxrec_report* report) {
  json config = json::object();
  for (const auto& [k, v] : settings) config[k] = v;
  return {{"tool", "ctxrec"},
          {"version", ctxrec_version()},
          {"command", command},
          {"config", config},
          {"run", report ? json::parse(ctxrec_report_details_json(report)) : json::object()}};
}

void show(const ctxrec_report* report, const std::string& table) {
  const long t = ctxrec_report_find_table(report, table.c_str());
  if (t >= 0) std::cout << ctxrec_report_markdown(report, static_cast<size_t>(t));
}

int run_extract(const Settings& s) {
  ctxrec_extract_options o{};
  const auto& offset = need(s, "utc-offset");
  const double hours = to_double(s, "utc-offset");
  if (std::abs(hours) > 14) throw Failure{kConfig, "--utc-offset must be within +-14 hours, got " + offset};
  o.has_utc_offset = 1;
  o.utc_offset_minutes = static_cast<int>(std::lround(hours * 60.0));
  const auto& anchors = s.at("anchors");
  o.anchors_path = anchors.empty() ? nullptr : anchors.c_str();
  o.clean_colabels = s.at("clean-colabels").empty() ? 0 : 1;
  const auto& in = need(s, "input");
  const auto& out = need(s, "out");
  ctxrec_report* r = nullptr;
  check(ctxrec_extract(in.c_str(), out.c_str(), &o, &r));
  ReportPtr report(r);
  write_text(fs::path(out) / "extract_manifest.json", make_manifest("extract", s, r).dump(2) + "\n");
  show(r, "summary");
  return kOk;
}

int run_evaluate(const Settings& s) {
  const auto dataset = load_dataset(need(s, "features-dir"));
  const auto& mode = s.at("mode");
  ctxrec_evaluate_options o{};
  if (mode == "cv5" || mode == "cv") o.mode = CTXREC_MODE_CV;
  else if (mode == "loo") o.mode = CTXREC_MODE_LOO;
  else throw Failure{kConfig, "--mode must be cv5 or loo, got '" + mode + "'"};
  const auto partition = o.mode == CTXREC_MODE_CV ? load_partition(need(s, "partition")) : load_partition(s.at("partition"));
  const auto labels = read_label_list(need(s, "labels"));
  const auto label_ptrs = c_strings(labels);
  o.labels = label_ptrs.data();
  o.n_labels = label_ptrs.size();
  o.systems = s.at("systems").c_str();
  o.seed = to_u64(s, "seed");
  o.jobs = static_cast<unsigned>(to_u64(s, "jobs"));
  o.metric = s.at("metric").c_str();
  ctxrec_report* r = nullptr;
  check(ctxrec_evaluate(dataset.get(), partition.get(), &o, &r));
  ReportPtr report(r);
  write_outputs(r, need(s, "out"), !s.at("markdown").empty(), make_manifest("evaluate", s, r));
  show(r, "results");
  return kOk;
}

int run_personalize(const Settings& s) {
  const auto dataset = load_dataset(need(s, "features-dir"));
  const auto partition = load_partition(s.at("partition"));
  const auto labels = read_label_list(need(s, "labels"));
  const auto label_ptrs = c_strings(labels);
  const auto& user = need(s, "user");
  ctxrec_personalize_options o{};
  o.user = user.c_str();
  o.labels = label_ptrs.data();
  o.n_labels = label_ptrs.size();
  o.seed = to_u64(s, "seed");
  o.jobs = static_cast<unsigned>(to_u64(s, "jobs"));
  o.many_examples_threshold = to_u64(s, "threshold");
  ctxrec_report* r = nullptr;
  check(ctxrec_personalize(dataset.get(), partition.get(), &o, &r));
  ReportPtr report(r);
  write_outputs(r, need(s, "out"), !s.at("markdown").empty(), make_manifest("personalize", s, r));
  show(r, "personalization");
  return kOk;
}

int run_confusion(const Settings& s) {
  const auto dataset = load_dataset(need(s, "features-dir"));
  const auto partition = load_partition(need(s, "partition"));
  const auto classes = read_label_list(need(s, "classes"));
  const auto class_ptrs = c_strings(classes);
  ctxrec_confusion_options o{};
  o.classes = class_ptrs.data();
  o.n_classes = class_ptrs.size();
  o.sensors = s.at("sensors").empty() ? nullptr : s.at("sensors").c_str();
  ctxrec_report* r = nullptr;
  check(ctxrec_confusion(dataset.get(), partition.get(), &o, &r));
  ReportPtr report(r);
  write_outputs(r, need(s, "out"), !s.at("markdown").empty(), make_manifest("confusion", s, r));
  show(r, "confusion");
  return kOk;
}

int run_partition(const Settings& s) {
  const auto k = to_u64(s, "folds");
  ctxrec_partition* p = nullptr;
  check(ctxrec_partition_generate(need(s, "platforms").c_str(), k, to_u64(s, "seed"), &p));
  PartitionPtr partition(p);
  const auto& out = need(s, "out");
  check(ctxrec_partition_save(p, out.c_str()));
  for (size_t f = 0; f < ctxrec_partition_fold_count(p); ++f)
    std::cout << "fold " << f << ": " << ctxrec_partition_fold_size(p, f) << " users\n";
  return kOk;
}

int run_train(const Settings& s) {
  const auto dataset = load_dataset(need(s, "features-dir"));
  const auto labels = read_label_list(need(s, "label"));
  if (labels.size() != 1) throw Failure{kConfig, "--label takes exactly one label"};
  ctxrec_train_options o{};
  o.label = labels[0].c_str();
  o.system = need(s, "system").c_str();
  o.seed = to_u64(s, "seed");
  if (!s.at("cost").empty()) {
    o.fixed_cost = 1;
    o.cost = to_double(s, "cost");
  }
  ctxrec_model* m = nullptr;
  check(ctxrec_model_train(dataset.get(), &o, &m));
  ModelPtr model(m);
  const auto& out = need(s, "out");
  check(ctxrec_model_save(m, out.c_str()));
  std::cout << "wrote " << ctxrec_model_kind(m) << " model for " << ctxrec_model_label(m) << " to " << out << '\n';
  return kOk;
}

int dispatch(const std::string& command, const Settings& s) {
  if (command == "extract") return run_extract(s);
  if (command == "evaluate") return run_evaluate(s);
  if (command == "personalize") return run_personalize(s);
  if (command == "confusion") return run_confusion(s);
  if (command == "partition") return run_partition(s);
  if (command == "train") return run_train(s);
  throw Failure{kConfig, "unknown command '" + command + "'"};
}

int run_rerun(const std::string& manifest_path, const std::string& out_override) {
  std::ifstream in(manifest_path);
  if (!in) throw Failure{kInput, "cannot read " + manifest_path};
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw Failure{kInput, manifest_path + ": " + e.what()};
  }
  if (!m.contains("command") || !m.contains("config")) throw Failure{kInput, manifest_path + ": not a run manifest"};
  Settings s;
  for (const auto& [k, v] : m["config"].items()) s[k] = v.get<std::string>();
  if (!out_override.empty()) s["out"] = out_override;
  return dispatch(m["command"].get<std::string>(), s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context recognition from phone and watch sensors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ctxrec_version()));

  std::map<std::string, Command> commands;
  auto make = [&](const std::string& name, const std::string& help) -> Command& {
    auto& c = commands[name];
    c.app = app.add_subcommand(name, help);
    return c;
  };

  {
    auto& c = make("extract", "Extract features from raw session bundles");
    add(c, "input", "Directory of <user>/<session>/ bundles");
    add(c, "out", "Output directory for per-user feature tables");
    add(c, "utc-offset", "Local time offset from UTC in hours (required)");
    add(c, "anchors", "Place anchor file for location-based label cleaning");
    add_flag(c, "clean-colabels", "Apply co-label corrections");
  }
  {
    auto& c = make("evaluate", "Cross-validate or leave-one-user-out evaluate systems");
    add(c, "features-dir", "Directory of per-user feature tables");
    add(c, "partition", "Fold partition file or directory (cv5)");
    add(c, "systems", "Comma-separated systems", "acc,gyro,wacc,loc,aud,ps,ef,lfa,lfl");
    add(c, "labels", "Labels file or comma-separated list");
    add(c, "mode", "cv5 or loo", "cv5");
    add(c, "metric", "Score column metric: accuracy, tpr, tnr, precision, ba, f1", "ba");
    add(c, "seed", "Seed for splits and random baselines", "0");
    add(c, "jobs", "Concurrent training tasks", "1");
    add(c, "out", "Output directory");
    add_flag(c, "markdown", "Also write Markdown tables");
  }
  {
    auto& c = make("personalize", "Universal, individual and adapted models for one user");
    add(c, "features-dir", "Directory of per-user feature tables");
    add(c, "partition", "Fold partition; universal models exclude the user's fold");
    add(c, "user", "User id");
    add(c, "labels", "Labels file or comma-separated list");
    add(c, "threshold", "Minimum user positives for the second average row", "300");
    add(c, "seed", "Seed", "0");
    add(c, "jobs", "Concurrent training tasks", "1");
    add(c, "out", "Output directory");
    add_flag(c, "markdown", "Also write Markdown tables");
  }
  {
    auto& c = make("confusion", "One-vs-rest multiclass confusion matrix");
    add(c, "features-dir", "Directory of per-user feature tables");
    add(c, "partition", "Fold partition file or directory");
    add(c, "classes", "Mutually exclusive labels (file or comma-separated list)");
    add(c, "sensors", "Comma-separated sensors (default: all six)");
    add(c, "out", "Output directory");
    add_flag(c, "markdown", "Also write Markdown tables");
  }
  {
    auto& c = make("partition", "Generate a platform-balanced fold partition");
    add(c, "platforms", "File of '<user> <iphone|android>' lines");
    add(c, "folds", "Number of folds", "5");
    add(c, "seed", "Seed", "0");
    add(c, "out", "Output partition file");
  }
  {
    auto& c = make("train", "Train one model on a whole dataset and save it");
    add(c, "features-dir", "Directory of per-user feature tables");
    add(c, "label", "Label");
    add(c, "system", "acc, gyro, wacc, loc, aud, ps, ef, lfa or lfl", "ef");
    add(c, "cost", "Fixed cost (default: grid search)");
    add(c, "seed", "Seed", "0");
    add(c, "out", "Output model file");
  }
  std::string manifest_path, rerun_out;
  auto* rerun = app.add_subcommand("rerun", "Repeat a run from its manifest.json");
  rerun->add_option("manifest", manifest_path, "Manifest written by a previous run")->required();
  rerun->add_option("--out", rerun_out, "Write outputs here instead of the recorded directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (rerun->parsed()) return run_rerun(manifest_path, rerun_out);
    for (auto& [name, c] : commands)
      if (c.app->parsed()) return dispatch(name, c.values);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
