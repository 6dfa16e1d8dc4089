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

#include "ctxrec/ctxrec.h"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <new>
#include <sstream>

#include "ctxrec/evaluation.hpp"
#include "ctxrec/experiment.hpp"
#include "ctxrec/features.hpp"
#include "ctxrec/fusion.hpp"
#include "ctxrec/ingestion.hpp"
#include "ctxrec/labels.hpp"
#include "ctxrec/model_io.hpp"
#include "ctxrec/personalization.hpp"
#include "ctxrec/report.hpp"
#include "ctxrec/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct ctxrec_dataset {
  ctxrec::LoadedDataset loaded;
  std::uint64_t hash = 0;
  std::vector<std::string> users;
  std::size_t core = 0;
};

struct ctxrec_partition {
  ctxrec::FoldPartition partition;
};

struct ctxrec_report {
  std::vector<ctxrec::Table> tables;
  std::vector<std::string> csv;
  std::vector<std::string> markdown;
  std::string details;
};

struct ctxrec_model {
  ctxrec::AnyModel model;
  std::string kind;
  std::string label;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
ctxrec_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CTXREC_OK;
  } catch (const ctxrec::DegenerateError& e) {
    g_last_error = e.what();
    return CTXREC_ERR_DEGENERATE;
  } catch (const ctxrec::ConfigError& e) {
    g_last_error = e.what();
    return CTXREC_ERR_CONFIG;
  } catch (const ctxrec::InputError& e) {
    g_last_error = e.what();
    return CTXREC_ERR_INPUT;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return CTXREC_ERR_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
    return CTXREC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "internal error";
    return CTXREC_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " must not be null");
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string exact(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::string> string_list(const char* const* items, std::size_t n, const char* what) {
  if (n > 0) require(items, what);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    require(items[i], what);
    out.emplace_back(items[i]);
  }
  return out;
}

std::vector<ctxrec::Sensor> sensor_list(const char* list) {
  if (!list) return {ctxrec::kAllSensors.begin(), ctxrec::kAllSensors.end()};
  std::vector<ctxrec::Sensor> out;
  std::stringstream ss(list);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    auto s = ctxrec::parse_sensor(tok);
    if (!s) throw ctxrec::ConfigError("unknown sensor: " + tok);
    out.push_back(*s);
  }
  if (out.empty()) throw ctxrec::ConfigError("no sensors requested");
  return out;
}

ctxrec_report* make_report(std::vector<ctxrec::Table> tables, std::string details) {
  auto* r = new ctxrec_report;
  r->tables = std::move(tables);
  for (const auto& t : r->tables) {
    r->csv.push_back(ctxrec::to_csv(t));
    r->markdown.push_back(ctxrec::render_markdown(t));
  }
  r->details = std::move(details);
  return r;
}

json costs_json(const std::vector<ctxrec::CostChoice>& costs) {
  json out = json::array();
  for (const auto& c : costs)
    out.push_back({{"fold", c.fold},
                   {"label", c.label},
                   {"component", c.component},
                   {"cost", c.cost},
                   {"fell_back", c.fell_back},
                   {"trivial", c.trivial}});
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void fill_metrics(const ctxrec::MetricReport& r, ctxrec_metrics* out) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out->accuracy = r.accuracy.value_or(nan);
  out->tpr = r.tpr.value_or(nan);
  out->tnr = r.tnr.value_or(nan);
  out->precision = r.precision.value_or(nan);
  out->balanced_accuracy = r.balanced_accuracy.value_or(nan);
  out->f1 = r.f1;
  out->f1_defined = r.f1_defined ? 1 : 0;
}

ctxrec::Sensor to_sensor(ctxrec_sensor s) {
  const auto i = static_cast<int>(s);
  if (i < 0 || i >= static_cast<int>(ctxrec::kNumSensors)) throw std::invalid_argument("sensor out of range");
  return ctxrec::kAllSensors[static_cast<std::size_t>(i)];
}

}  // namespace

extern "C" {

const char* ctxrec_version(void) { return "1.0.0"; }

const char* ctxrec_last_error(void) { return g_last_error.c_str(); }

const char* ctxrec_status_name(ctxrec_status status) {
  switch (status) {
    case CTXREC_OK: return "ok";
    case CTXREC_ERR_INPUT: return "input error";
    case CTXREC_ERR_CONFIG: return "configuration error";
    case CTXREC_ERR_INTERNAL: return "internal error";
    case CTXREC_ERR_DEGENERATE: return "degenerate training data";
    case CTXREC_ERR_ARGUMENT: return "invalid argument";
  }
  return "unknown status";
}

ctxrec_status ctxrec_compute_metrics(const ctxrec_counts* counts, ctxrec_metrics* out) {
  return guarded([&] {
    require(counts, "counts");
    require(out, "out");
    fill_metrics(ctxrec::compute_metrics({counts->tp, counts->tn, counts->fp, counts->fn}), out);
  });
}

ctxrec_status ctxrec_random_baseline_p99(uint64_t n_positive, uint64_t n_total, size_t n_sims, uint64_t seed,
                                         ctxrec_metrics* out) {
  return guarded([&] {
    require(out, "out");
    const auto b = ctxrec::random_baseline_p99(n_positive, n_total, n_sims, seed);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out->accuracy = b.accuracy.value_or(nan);
    out->tpr = b.tpr.value_or(nan);
    out->tnr = b.tnr.value_or(nan);
    out->precision = b.precision.value_or(nan);
    out->balanced_accuracy = b.balanced_accuracy.value_or(nan);
    out->f1 = b.f1.value_or(nan);
    out->f1_defined = b.f1.has_value() ? 1 : 0;
  });
}

size_t ctxrec_sensor_dim(ctxrec_sensor sensor) {
  const auto i = static_cast<int>(sensor);
  if (i < 0 || i >= static_cast<int>(ctxrec::kNumSensors)) return 0;
  return ctxrec::kSensorDims[static_cast<std::size_t>(i)];
}

const char* ctxrec_sensor_name(ctxrec_sensor sensor) {
  static const std::array<std::string, ctxrec::kNumSensors> names = [] {
    std::array<std::string, ctxrec::kNumSensors> n;
    for (auto s : ctxrec::kAllSensors) n[ctxrec::sensor_index(s)] = std::string(ctxrec::sensor_name(s));
    return n;
  }();
  const auto i = static_cast<int>(sensor);
  if (i < 0 || i >= static_cast<int>(ctxrec::kNumSensors)) return nullptr;
  return names[static_cast<std::size_t>(i)].c_str();
}

const char* ctxrec_feature_column(ctxrec_sensor sensor, size_t index) {
  const auto i = static_cast<int>(sensor);
  if (i < 0 || i >= static_cast<int>(ctxrec::kNumSensors)) return nullptr;
  const auto& names = ctxrec::feature_column_names(ctxrec::kAllSensors[static_cast<std::size_t>(i)]);
  return index < names.size() ? names[index].c_str() : nullptr;
}

ctxrec_status ctxrec_extract_triaxial(ctxrec_sensor sensor, const double* t, const double* xyz, size_t n,
                                      double nominal_rate, double* values, unsigned char* mask) {
  return guarded([&] {
    require(t, "t");
    require(xyz, "xyz");
    require(values, "values");
    require(mask, "mask");
    const auto s = to_sensor(sensor);
    ctxrec::TriaxialSeries series;
    series.nominal_rate = nominal_rate;
    series.unit = s == ctxrec::Sensor::Gyro   ? ctxrec::Unit::RadPerSec
                  : s == ctxrec::Sensor::WAcc ? ctxrec::Unit::MilliG
                                              : ctxrec::Unit::G;
    for (size_t i = 0; i < n; ++i) {
      series.relative_timestamps.push_back(t[i]);
      series.samples.push_back({xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]});
    }
    ctxrec::FeatureVector f;
    switch (s) {
      case ctxrec::Sensor::Acc:
      case ctxrec::Sensor::Gyro: f = ctxrec::extract_motion_features(series, s); break;
      case ctxrec::Sensor::WAcc: f = ctxrec::extract_watch_features(series); break;
      default: throw ctxrec::ConfigError("sensor is not triaxial");
    }
    for (size_t j = 0; j < f.size(); ++j) {
      values[j] = f[j];
      mask[j] = f.is_missing(j) ? 1 : 0;
    }
  });
}

ctxrec_status ctxrec_time_of_day_bins(int hour, unsigned char out[8]) {
  return guarded([&] {
    require(out, "out");
    const auto bins = ctxrec::time_of_day_bins(hour);
    for (std::size_t b = 0; b < bins.size(); ++b) out[b] = bins[b] ? 1 : 0;
  });
}

ctxrec_status ctxrec_extract(const char* input_dir, const char* output_dir, const ctxrec_extract_options* options,
                             ctxrec_report** out) {
  return guarded([&] {
    require(input_dir, "input_dir");
    require(output_dir, "output_dir");
    require(options, "options");
    require(out, "out");
    const auto start = std::chrono::steady_clock::now();
    if (!options->has_utc_offset) throw ctxrec::ConfigError("a UTC offset is required (--utc-offset)");
    if (!fs::is_directory(input_dir)) throw ctxrec::InputError(std::string("cannot read input directory ") + input_dir);
    const auto sessions = ctxrec::find_sessions(input_dir);
    if (sessions.empty()) throw ctxrec::InputError(std::string("no sessions found in ") + input_dir);

    std::optional<ctxrec::AnchorSet> anchors;
    if (options->anchors_path && *options->anchors_path) anchors = ctxrec::load_anchor_file(options->anchors_path);

    ctxrec::RawSessionOptions raw;
    raw.utc_offset_minutes = options->utc_offset_minutes;
    std::map<std::string, std::vector<ctxrec::Example>> by_user;
    std::vector<std::string> labels;
    std::size_t relabeled = 0;
    for (const auto& dir : sessions) {
      auto e = ctxrec::load_raw_session(dir, raw);
      ctxrec::extract_all_features(e);
      if (anchors) {
        const auto updates = ctxrec::adjust_label_by_location(e, *anchors);
        relabeled += updates.size();
        ctxrec::apply_label_updates(e, updates);
      }
      if (options->clean_colabels) {
        const auto updates = ctxrec::adjust_label_by_colabels(e);
        relabeled += updates.size();
        ctxrec::apply_label_updates(e, updates);
      }
      for (const auto& l : e.labels)
        if (std::find(labels.begin(), labels.end(), l.label_name) == labels.end()) labels.push_back(l.label_name);
      e.sensor_data = {};
      by_user[e.user_id].push_back(std::move(e));
    }
    std::sort(labels.begin(), labels.end());

    fs::create_directories(output_dir);
    ctxrec::Table summary;
    summary.name = "summary";
    summary.header = {"user", "examples", "acc", "gyro", "wacc", "loc", "aud", "ps", "file"};
    std::vector<fs::path> written;
    for (auto& [user, examples] : by_user) {
      std::stable_sort(examples.begin(), examples.end(),
                       [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
      for (std::size_t i = 1; i < examples.size(); ++i)
        if (examples[i].timestamp == examples[i - 1].timestamp)
          throw ctxrec::InputError("user " + user + " has two sessions at timestamp " +
                                   std::to_string(examples[i].timestamp));
      const auto path = fs::path(output_dir) / (user + ".features_labels.csv");
      std::ofstream f(path, std::ios::binary);
      if (!f) throw ctxrec::InputError("cannot write " + path.string());
      ctxrec::write_features_csv(f, examples, labels);
      if (!f) throw ctxrec::InputError("failed writing " + path.string());
      written.push_back(path);
      std::vector<std::string> row = {user, std::to_string(examples.size())};
      for (auto s : ctxrec::kAllSensors)
        row.push_back(std::to_string(std::count_if(examples.begin(), examples.end(),
                                                   [&](const auto& e) { return e.has_features(s); })));
      row.push_back(path.filename().string());
      summary.rows.push_back(std::move(row));
    }
    json details = {{"command", "extract"},
                    {"sessions", sessions.size()},
                    {"users", by_user.size()},
                    {"labels_changed_by_cleaning", relabeled},
                    {"output_hash", hex64(ctxrec::hash_files(written))},
                    {"timing_seconds", seconds_since(start)}};
    *out = make_report({std::move(summary)}, details.dump(2));
  });
}

const char* ctxrec_canonical_label(const char* name) {
  thread_local std::string buf;
  buf = name ? ctxrec::canonical_label_name(name) : std::string();
  return buf.c_str();
}

ctxrec_status ctxrec_dataset_load(const char* features_dir, ctxrec_dataset** out) {
  return guarded([&] {
    require(features_dir, "features_dir");
    require(out, "out");
    auto d = std::make_unique<ctxrec_dataset>();
    d->loaded = ctxrec::load_features_dir(features_dir);
    d->hash = ctxrec::hash_files(d->loaded.files);
    d->users = d->loaded.dataset.users();
    d->core = d->loaded.dataset.core_subset().size();
    *out = d.release();
  });
}

void ctxrec_dataset_free(ctxrec_dataset* dataset) { delete dataset; }

size_t ctxrec_dataset_example_count(const ctxrec_dataset* d) { return d ? d->loaded.dataset.examples().size() : 0; }
size_t ctxrec_dataset_core_count(const ctxrec_dataset* d) { return d ? d->core : 0; }
size_t ctxrec_dataset_user_count(const ctxrec_dataset* d) { return d ? d->users.size() : 0; }

const char* ctxrec_dataset_user(const ctxrec_dataset* d, size_t index) {
  return d && index < d->users.size() ? d->users[index].c_str() : nullptr;
}

size_t ctxrec_dataset_label_count(const ctxrec_dataset* d) {
  return d ? d->loaded.dataset.label_vocabulary().size() : 0;
}

const char* ctxrec_dataset_label(const ctxrec_dataset* d, size_t index) {
  if (!d) return nullptr;
  const auto& v = d->loaded.dataset.label_vocabulary();
  return index < v.size() ? v[index].c_str() : nullptr;
}

size_t ctxrec_dataset_warning_count(const ctxrec_dataset* d) { return d ? d->loaded.warnings.size() : 0; }

const char* ctxrec_dataset_warning(const ctxrec_dataset* d, size_t index) {
  return d && index < d->loaded.warnings.size() ? d->loaded.warnings[index].c_str() : nullptr;
}

uint64_t ctxrec_dataset_hash(const ctxrec_dataset* d) { return d ? d->hash : 0; }

ctxrec_status ctxrec_partition_load(const char* path, ctxrec_partition** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ctxrec_partition{ctxrec::load_fold_partition(path)};
  });
}

ctxrec_status ctxrec_partition_generate(const char* platforms_path, size_t k, uint64_t seed,
                                        ctxrec_partition** out) {
  return guarded([&] {
    require(platforms_path, "platforms_path");
    require(out, "out");
    const auto users = ctxrec::load_user_platforms(platforms_path);
    *out = new ctxrec_partition{ctxrec::partition_folds(users, k, seed)};
  });
}

ctxrec_status ctxrec_partition_save(const ctxrec_partition* partition, const char* path) {
  return guarded([&] {
    require(partition, "partition");
    require(path, "path");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ctxrec::InputError(std::string("cannot write ") + path);
    ctxrec::write_fold_partition(f, partition->partition);
  });
}

void ctxrec_partition_free(ctxrec_partition* partition) { delete partition; }

size_t ctxrec_partition_fold_count(const ctxrec_partition* p) { return p ? p->partition.folds.size() : 0; }

size_t ctxrec_partition_fold_size(const ctxrec_partition* p, size_t fold) {
  return p && fold < p->partition.folds.size() ? p->partition.folds[fold].size() : 0;
}

const char* ctxrec_partition_user(const ctxrec_partition* p, size_t fold, size_t index) {
  if (!p || fold >= p->partition.folds.size() || index >= p->partition.folds[fold].size()) return nullptr;
  return p->partition.folds[fold][index].c_str();
}

ctxrec_status ctxrec_evaluate(const ctxrec_dataset* dataset, const ctxrec_partition* partition,
                              const ctxrec_evaluate_options* options, ctxrec_report** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(options, "options");
    require(out, "out");
    const auto start = std::chrono::steady_clock::now();
    ctxrec::EvaluationConfig config;
    config.labels = string_list(options->labels, options->n_labels, "labels");
    config.systems = ctxrec::parse_system_list(options->systems ? options->systems : "");
    if (options->mode != CTXREC_MODE_CV && options->mode != CTXREC_MODE_LOO)
      throw ctxrec::ConfigError("unknown evaluation mode");
    config.mode = options->mode == CTXREC_MODE_LOO ? ctxrec::EvalMode::LeaveOneUserOut
                                                   : ctxrec::EvalMode::CrossValidation;
    config.seed = options->seed;
    config.jobs = options->jobs == 0 ? 1 : options->jobs;
    const auto metric = ctxrec::parse_metric(options->metric ? options->metric : "ba");
    if (!metric) throw ctxrec::ConfigError(std::string("unknown metric: ") + options->metric);

    const auto result = ctxrec::evaluate_systems(dataset->loaded.dataset,
                                                 partition ? &partition->partition : nullptr, config);
    json systems = json::array();
    for (auto s : config.systems) systems.push_back(std::string(ctxrec::system_name(s)));
    json details = {{"command", "evaluate"},
                    {"mode", std::string(ctxrec::eval_mode_name(config.mode))},
                    {"seed", config.seed},
                    {"grid_search", config.mode == ctxrec::EvalMode::CrossValidation},
                    {"fixed_cost", config.mode == ctxrec::EvalMode::CrossValidation ? json() : json(1.0)},
                    {"metric", std::string(ctxrec::metric_name(*metric))},
                    {"systems", systems},
                    {"labels", config.labels},
                    {"random_simulations", config.random_sims},
                    {"dataset_hash", hex64(dataset->hash)},
                    {"folds", result.folds},
                    {"chosen_costs", costs_json(result.costs)},
                    {"timing_seconds", seconds_since(start)}};
    *out = make_report({ctxrec::evaluation_table(result, *metric), ctxrec::cost_table(result.costs),
                        ctxrec::learned_weights_table(result)},
                       details.dump(2));
  });
}

ctxrec_status ctxrec_personalize(const ctxrec_dataset* dataset, const ctxrec_partition* partition,
                                 const ctxrec_personalize_options* options, ctxrec_report** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(options, "options");
    require(options->user, "user");
    require(out, "out");
    const auto start = std::chrono::steady_clock::now();
    ctxrec::PersonalizationConfig config;
    config.labels = string_list(options->labels, options->n_labels, "labels");
    config.seed = options->seed;
    config.jobs = options->jobs == 0 ? 1 : options->jobs;
    if (options->many_examples_threshold) config.many_examples_threshold = options->many_examples_threshold;
    const auto& ds = dataset->loaded.dataset;
    const auto result = ctxrec::run_personalization(ds, partition ? &partition->partition : nullptr,
                                                    options->user, config);

    ctxrec::Table predictions;
    predictions.name = "predictions";
    predictions.header = {"label", "timestamp", "truth", "universal", "individual", "adapted"};
    for (const auto& l : result.labels)
      for (const auto& p : l.predictions)
        predictions.rows.push_back({l.label, std::to_string(ds.examples()[p.example].timestamp), p.truth ? "1" : "0",
                                    exact(p.universal), exact(p.individual), exact(p.adapted)});
    json details = {{"command", "personalize"},
                    {"user", result.user_id},
                    {"seed", config.seed},
                    {"labels", config.labels},
                    {"many_examples_threshold", config.many_examples_threshold},
                    {"adaptation_examples", result.split.adaptation.size()},
                    {"deployment_examples", result.split.deployment.size()},
                    {"universal_training_examples", result.universal_training.size()},
                    {"dataset_hash", hex64(dataset->hash)},
                    {"chosen_costs", costs_json(result.costs)},
                    {"timing_seconds", seconds_since(start)}};
    *out = make_report({ctxrec::personalization_table(result, config.many_examples_threshold),
                        ctxrec::cost_table(result.costs), std::move(predictions)},
                       details.dump(2));
  });
}

ctxrec_status ctxrec_confusion(const ctxrec_dataset* dataset, const ctxrec_partition* partition,
                               const ctxrec_confusion_options* options, ctxrec_report** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(options, "options");
    require(out, "out");
    if (!partition) throw ctxrec::ConfigError("the confusion experiment needs a fold partition");
    const auto start = std::chrono::steady_clock::now();
    auto classes = string_list(options->classes, options->n_classes, "classes");
    const auto sensors = sensor_list(options->sensors);
    const auto& ds = dataset->loaded.dataset;
    for (const auto& c : classes)
      if (!ds.has_label(c)) throw ctxrec::ConfigError("label not in dataset vocabulary: " + c);
    const auto& p = partition->partition;
    ctxrec::validate_partition(p);

    std::vector<std::size_t> truth, predicted;
    for (std::size_t f = 0; f < p.folds.size(); ++f) {
      const auto train = ctxrec::training_indices(ds, p, f);
      const auto model = ctxrec::multiclass_one_vs_rest(ds.examples(), train, classes, sensors);
      for (const auto& u : p.folds[f])
        for (auto i : ds.user_examples(u))
          if (auto c = ctxrec::single_class_of(ds.examples()[i], classes, sensors)) {
            truth.push_back(*c);
            predicted.push_back(model.predict(ds.examples()[i]));
          }
    }
    const auto matrix = ctxrec::confusion_matrix(truth, predicted, classes);
    json sensor_names = json::array();
    for (auto s : sensors) sensor_names.push_back(std::string(ctxrec::sensor_name(s)));
    json details = {{"command", "confusion"},
                    {"classes", classes},
                    {"sensors", sensor_names},
                    {"fixed_cost", 1.0},
                    {"evaluated_examples", truth.size()},
                    {"dataset_hash", hex64(dataset->hash)},
                    {"timing_seconds", seconds_since(start)}};
    *out = make_report({ctxrec::confusion_table(matrix)}, details.dump(2));
  });
}

void ctxrec_report_free(ctxrec_report* report) { delete report; }

size_t ctxrec_report_table_count(const ctxrec_report* r) { return r ? r->tables.size() : 0; }

const char* ctxrec_report_table_name(const ctxrec_report* r, size_t table) {
  return r && table < r->tables.size() ? r->tables[table].name.c_str() : nullptr;
}

long ctxrec_report_find_table(const ctxrec_report* r, const char* name) {
  if (!r || !name) return -1;
  for (std::size_t i = 0; i < r->tables.size(); ++i)
    if (r->tables[i].name == name) return static_cast<long>(i);
  return -1;
}

size_t ctxrec_report_rows(const ctxrec_report* r, size_t table) {
  return r && table < r->tables.size() ? r->tables[table].rows.size() : 0;
}

size_t ctxrec_report_cols(const ctxrec_report* r, size_t table) {
  return r && table < r->tables.size() ? r->tables[table].header.size() : 0;
}

const char* ctxrec_report_header(const ctxrec_report* r, size_t table, size_t col) {
  if (!r || table >= r->tables.size() || col >= r->tables[table].header.size()) return nullptr;
  return r->tables[table].header[col].c_str();
}

const char* ctxrec_report_cell(const ctxrec_report* r, size_t table, size_t row, size_t col) {
  if (!r || table >= r->tables.size()) return nullptr;
  const auto& t = r->tables[table];
  if (row >= t.rows.size() || col >= t.rows[row].size()) return nullptr;
  return t.rows[row][col].c_str();
}

const char* ctxrec_report_csv(const ctxrec_report* r, size_t table) {
  return r && table < r->csv.size() ? r->csv[table].c_str() : nullptr;
}

const char* ctxrec_report_markdown(const ctxrec_report* r, size_t table) {
  return r && table < r->markdown.size() ? r->markdown[table].c_str() : nullptr;
}

const char* ctxrec_report_details_json(const ctxrec_report* r) { return r ? r->details.c_str() : nullptr; }

ctxrec_status ctxrec_model_train(const ctxrec_dataset* dataset, const ctxrec_train_options* options,
                                 ctxrec_model** out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(options, "options");
    require(options->label, "label");
    require(options->system, "system");
    require(out, "out");
    const auto& ds = dataset->loaded.dataset;
    const std::string label = options->label;
    if (!ds.has_label(label)) throw ctxrec::ConfigError("label not in dataset vocabulary: " + label);
    const auto system = ctxrec::parse_system(options->system);
    if (!system) throw ctxrec::ConfigError(std::string("unknown system: ") + options->system);

    ctxrec::PipelineOptions po;
    po.seed = options->seed;
    if (options->fixed_cost) {
      if (!(options->cost > 0)) throw ctxrec::ConfigError("cost must be positive");
      po.grid_search = false;
      po.fixed_cost = options->cost;
    }
    std::vector<std::size_t> all(ds.examples().size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    auto m = std::make_unique<ctxrec_model>();
    m->label = label;
    if (auto s = ctxrec::system_sensor(*system)) {
      m->model = ctxrec::train_single_sensor(ds.examples(), all, *s, label, po);
      m->kind = "single";
    } else if (*system == ctxrec::SystemKind::EF) {
      m->model = ctxrec::early_fusion(ds.examples(), all, label, po);
      m->kind = "ef";
    } else {
      std::vector<ctxrec::SingleSensorModel> comps;
      for (auto s : ctxrec::kAllSensors) {
        auto sp = po;
        sp.seed = ctxrec::derive_seed(po.seed, {ctxrec::sensor_index(s)});
        comps.push_back(ctxrec::train_single_sensor(ds.examples(), all, s, label, sp));
      }
      if (*system == ctxrec::SystemKind::LFA) {
        m->model = ctxrec::make_late_average(std::move(comps));
        m->kind = "lfa";
      } else {
        m->model = ctxrec::late_fusion_learned(ds.examples(), all, label, std::move(comps), po);
        m->kind = "lfl";
      }
    }
    *out = m.release();
  });
}

ctxrec_status ctxrec_model_load(const char* path, ctxrec_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::ifstream f(path);
    if (!f) throw ctxrec::InputError(std::string("cannot open ") + path);
    auto m = std::make_unique<ctxrec_model>();
    m->model = ctxrec::read_model(f);
    if (const auto* s = std::get_if<ctxrec::SingleSensorModel>(&m->model)) {
      m->kind = "single";
      m->label = s->label;
    } else {
      const auto& fm = std::get<ctxrec::FusionModel>(m->model);
      m->kind = std::string(ctxrec::fusion_variant_name(fm.variant));
      m->label = fm.label;
    }
    *out = m.release();
  });
}

ctxrec_status ctxrec_model_save(const ctxrec_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ctxrec::InputError(std::string("cannot write ") + path);
    ctxrec::write_model(f, model->model);
  });
}

void ctxrec_model_free(ctxrec_model* model) { delete model; }

const char* ctxrec_model_kind(const ctxrec_model* model) { return model ? model->kind.c_str() : nullptr; }
const char* ctxrec_model_label(const ctxrec_model* model) { return model ? model->label.c_str() : nullptr; }

ctxrec_status ctxrec_model_predict(const ctxrec_model* model, const double* const features[CTXREC_NUM_SENSORS],
                                   double* probability) {
  return guarded([&] {
    require(model, "model");
    require(features, "features");
    require(probability, "probability");
    ctxrec::Example e;
    for (auto s : ctxrec::kAllSensors) {
      const auto* v = features[ctxrec::sensor_index(s)];
      if (v) e.features[ctxrec::sensor_index(s)] = ctxrec::FeatureVector(s, std::vector<double>(v, v + ctxrec::sensor_dim(s)));
    }
    if (const auto* single = std::get_if<ctxrec::SingleSensorModel>(&model->model)) {
      if (!e.has_features(single->sensor))
        throw ctxrec::InputError("missing " + std::string(ctxrec::sensor_name(single->sensor)) + " features");
      *probability = single->predict_proba(*e.feature(single->sensor));
      return;
    }
    *probability = std::get<ctxrec::FusionModel>(model->model).predict_proba(e);
  });
}

}  // extern "C"
