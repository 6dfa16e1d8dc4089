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

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "ctxrec/ctxrec.h"
#include "synthetic.hpp"

using doctest::Approx;

namespace {

std::string error() { return ctxrec_last_error(); }

struct Fixture {
  ctxrec::testing::TempDir dir{"capi"};
  ctxrec_dataset* dataset = nullptr;
  ctxrec_partition* partition = nullptr;

  Fixture() {
    const auto d = ctxrec::testing::synthetic_dataset({.users = 6, .per_user = 30, .seed = 12});
    ctxrec::testing::write_feature_dir(dir / "features", d);
    ctxrec::testing::write_platforms(dir / "platforms.txt", d);
    REQUIRE(ctxrec_dataset_load((dir / "features").c_str(), &dataset) == CTXREC_OK);
    REQUIRE(ctxrec_partition_generate((dir / "platforms.txt").c_str(), 3, 5, &partition) == CTXREC_OK);
  }
  ~Fixture() {
    ctxrec_dataset_free(dataset);
    ctxrec_partition_free(partition);
  }
};

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(ctxrec_version()).size() > 0);
  CHECK(std::string(ctxrec_status_name(CTXREC_OK)) == "ok");
  CHECK(std::string(ctxrec_status_name(CTXREC_ERR_CONFIG)) == "configuration error");
}

TEST_CASE("metrics through the C interface") {
  const ctxrec_counts c = {3, 4, 2, 1};
  ctxrec_metrics m;
  REQUIRE(ctxrec_compute_metrics(&c, &m) == CTXREC_OK);
  CHECK(m.balanced_accuracy == Approx(0.708333333333333));
  CHECK(m.f1 == Approx(2.0 / 3));
  const ctxrec_counts none = {0, 5, 0, 0};
  REQUIRE(ctxrec_compute_metrics(&none, &m) == CTXREC_OK);
  CHECK(std::isnan(m.tpr));
  CHECK(std::isnan(m.balanced_accuracy));
  CHECK(m.f1_defined == 0);
  CHECK(ctxrec_compute_metrics(nullptr, &m) == CTXREC_ERR_ARGUMENT);
  CHECK(error().find("counts") != std::string::npos);
  CHECK(ctxrec_random_baseline_p99(10, 5, 10, 0, &m) == CTXREC_ERR_CONFIG);
}

TEST_CASE("feature helpers") {
  std::size_t total = 0;
  for (int s = 0; s < CTXREC_NUM_SENSORS; ++s) total += ctxrec_sensor_dim(static_cast<ctxrec_sensor>(s));
  CHECK(total == CTXREC_EARLY_FUSION_DIM);
  CHECK(std::string(ctxrec_sensor_name(CTXREC_SENSOR_WACC)) == "wacc");
  CHECK(ctxrec_feature_column(CTXREC_SENSOR_ACC, 0) != nullptr);
  CHECK(ctxrec_feature_column(CTXREC_SENSOR_ACC, 26) == nullptr);

  unsigned char bins[8];
  REQUIRE(ctxrec_time_of_day_bins(1, bins) == CTXREC_OK);
  // Hour 1 lies in [0, 6) and in the wrapped bin [21, 3).
  for (int b = 0; b < 8; ++b) CHECK(bins[b] == (b == 0 || b == 7 ? 1 : 0));
  CHECK(ctxrec_time_of_day_bins(24, bins) == CTXREC_ERR_INPUT);

  ctxrec::Rng rng(1);
  const auto series = ctxrec::testing::random_triaxial(rng, ctxrec::Unit::G, 40, 20);
  std::vector<double> xyz;
  for (const auto& s : series.samples) xyz.insert(xyz.end(), s.begin(), s.end());
  std::vector<double> values(26);
  std::vector<unsigned char> mask(26);
  REQUIRE(ctxrec_extract_triaxial(CTXREC_SENSOR_ACC, series.relative_timestamps.data(), xyz.data(),
                                  series.samples.size(), 40, values.data(), mask.data()) == CTXREC_OK);
  for (auto v : values) CHECK(std::isfinite(v));
  CHECK(ctxrec_extract_triaxial(CTXREC_SENSOR_LOC, series.relative_timestamps.data(), xyz.data(),
                                series.samples.size(), 40, values.data(), mask.data()) == CTXREC_ERR_CONFIG);
  CHECK(std::string(ctxrec_canonical_label("Lying down")) == "LYING_DOWN");
}

TEST_CASE("dataset, partition and evaluation handles") {
  Fixture f;
  CHECK(ctxrec_dataset_example_count(f.dataset) == 180);
  CHECK(ctxrec_dataset_user_count(f.dataset) == 6);
  CHECK(std::string(ctxrec_dataset_user(f.dataset, 0)) == "user00");
  CHECK(ctxrec_dataset_user(f.dataset, 6) == nullptr);
  CHECK(ctxrec_dataset_label_count(f.dataset) == 3);
  CHECK(ctxrec_dataset_core_count(f.dataset) <= 180);
  CHECK(ctxrec_partition_fold_count(f.partition) == 3);
  std::size_t users = 0;
  for (std::size_t k = 0; k < 3; ++k) users += ctxrec_partition_fold_size(f.partition, k);
  CHECK(users == 6);

  const auto saved = f.dir / "partition.txt";
  REQUIRE(ctxrec_partition_save(f.partition, saved.c_str()) == CTXREC_OK);
  ctxrec_partition* back = nullptr;
  REQUIRE(ctxrec_partition_load(saved.c_str(), &back) == CTXREC_OK);
  CHECK(std::string(ctxrec_partition_user(back, 2, 1)) == ctxrec_partition_user(f.partition, 2, 1));
  ctxrec_partition_free(back);

  const char* labels[] = {"SITTING", "AT_HOME"};
  ctxrec_evaluate_options o{};
  o.labels = labels;
  o.n_labels = 2;
  o.systems = "acc,loc,ef,lfa,lfl";
  o.jobs = 2;
  ctxrec_report* r = nullptr;
  REQUIRE(ctxrec_evaluate(f.dataset, f.partition, &o, &r) == CTXREC_OK);
  const long t = ctxrec_report_find_table(r, "results");
  REQUIRE(t >= 0);
  CHECK(ctxrec_report_find_table(r, "nope") == -1);
  CHECK(ctxrec_report_find_table(r, "costs") >= 0);
  CHECK(ctxrec_report_find_table(r, "lfl_weights") >= 0);
  CHECK(ctxrec_report_cols(r, t) == 4 + 5);
  CHECK(ctxrec_report_rows(r, t) == 2 + 2);
  CHECK(std::string(ctxrec_report_header(r, t, 4)) == "acc");
  CHECK(std::string(ctxrec_report_cell(r, t, 0, 0)) == "SITTING");
  CHECK(ctxrec_report_cell(r, t, 99, 0) == nullptr);
  CHECK(std::string(ctxrec_report_csv(r, t)).rfind("label,n_e,n_s,p99,acc,loc,ef,lfa,lfl\nSITTING,", 0) == 0);
  CHECK(std::string(ctxrec_report_markdown(r, t)).find("| SITTING") != std::string::npos);
  CHECK(std::string(ctxrec_report_details_json(r)).find("\"dataset_hash\"") != std::string::npos);
  ctxrec_report_free(r);

  const char* bad[] = {"FLYING"};
  o.labels = bad;
  o.n_labels = 1;
  CHECK(ctxrec_evaluate(f.dataset, f.partition, &o, &r) == CTXREC_ERR_CONFIG);
  CHECK(error().find("FLYING") != std::string::npos);
  o.labels = labels;
  o.systems = "acc,sonar";
  CHECK(ctxrec_evaluate(f.dataset, f.partition, &o, &r) == CTXREC_ERR_CONFIG);
  o.systems = "acc";
  CHECK(ctxrec_evaluate(f.dataset, nullptr, &o, &r) == CTXREC_ERR_CONFIG);
  o.mode = CTXREC_MODE_LOO;
  REQUIRE(ctxrec_evaluate(f.dataset, nullptr, &o, &r) == CTXREC_OK);
  ctxrec_report_free(r);
}

TEST_CASE("personalization and confusion reports") {
  Fixture f;
  const char* labels[] = {"SITTING"};
  ctxrec_personalize_options p{};
  p.user = "user01";
  p.labels = labels;
  p.n_labels = 1;
  ctxrec_report* r = nullptr;
  REQUIRE(ctxrec_personalize(f.dataset, f.partition, &p, &r) == CTXREC_OK);
  const long t = ctxrec_report_find_table(r, "personalization");
  REQUIRE(t >= 0);
  CHECK(std::string(ctxrec_report_cell(r, t, 0, 0)) == "SITTING");
  CHECK(ctxrec_report_find_table(r, "predictions") >= 0);
  ctxrec_report_free(r);
  p.user = "ghost";
  CHECK(ctxrec_personalize(f.dataset, f.partition, &p, &r) == CTXREC_ERR_CONFIG);
  CHECK(error().find("ghost") != std::string::npos);

  const char* classes[] = {"SITTING", "RUNNING"};
  ctxrec_confusion_options c{};
  c.classes = classes;
  c.n_classes = 2;
  c.sensors = "acc,wacc";
  REQUIRE(ctxrec_confusion(f.dataset, f.partition, &c, &r) == CTXREC_OK);
  const long ct = ctxrec_report_find_table(r, "confusion");
  REQUIRE(ct >= 0);
  CHECK(ctxrec_report_rows(r, ct) == 2);
  ctxrec_report_free(r);
}

TEST_CASE("models train, save, load and predict identically") {
  Fixture f;
  ctxrec_train_options o{};
  o.label = "SITTING";
  o.system = "lfl";
  ctxrec_model* m = nullptr;
  REQUIRE(ctxrec_model_train(f.dataset, &o, &m) == CTXREC_OK);
  CHECK(std::string(ctxrec_model_kind(m)) == "lfl");
  CHECK(std::string(ctxrec_model_label(m)) == "SITTING");
  const auto path = f.dir / "model.txt";
  REQUIRE(ctxrec_model_save(m, path.c_str()) == CTXREC_OK);
  ctxrec_model* back = nullptr;
  REQUIRE(ctxrec_model_load(path.c_str(), &back) == CTXREC_OK);

  ctxrec::Rng rng(3);
  std::vector<std::vector<double>> features;
  const double* ptrs[CTXREC_NUM_SENSORS];
  for (int s = 0; s < CTXREC_NUM_SENSORS; ++s)
    features.push_back(ctxrec::testing::gaussian_vector(rng, ctxrec_sensor_dim(static_cast<ctxrec_sensor>(s))));
  for (int s = 0; s < CTXREC_NUM_SENSORS; ++s) ptrs[s] = features[s].data();
  double a = -1, b = -2;
  REQUIRE(ctxrec_model_predict(m, ptrs, &a) == CTXREC_OK);
  REQUIRE(ctxrec_model_predict(back, ptrs, &b) == CTXREC_OK);
  CHECK(a == b);
  CHECK(a > 0.0);
  CHECK(a < 1.0);
  ptrs[CTXREC_SENSOR_AUD] = nullptr;
  CHECK(ctxrec_model_predict(m, ptrs, &a) == CTXREC_ERR_INPUT);
  ctxrec_model_free(m);
  ctxrec_model_free(back);

  o.system = "magic";
  CHECK(ctxrec_model_train(f.dataset, &o, &m) == CTXREC_ERR_CONFIG);
  o.system = "acc";
  o.fixed_cost = 1;
  o.cost = -1;
  CHECK(ctxrec_model_train(f.dataset, &o, &m) == CTXREC_ERR_CONFIG);
  CHECK(ctxrec_model_load((f.dir / "missing.txt").c_str(), &m) == CTXREC_ERR_INPUT);
}

TEST_CASE("extraction from raw bundles") {
  ctxrec::testing::TempDir dir("capi-extract");
  for (int i = 0; i < 3; ++i)
    ctxrec::testing::write_raw_session(dir / "raw", "alice", 1440000000 + 60 * i, 100 + i, i % 2 == 0);
  ctxrec_extract_options o{};
  ctxrec_report* r = nullptr;
  CHECK(ctxrec_extract((dir / "raw").c_str(), (dir / "out").c_str(), &o, &r) == CTXREC_ERR_CONFIG);
  o.has_utc_offset = 1;
  REQUIRE(ctxrec_extract((dir / "raw").c_str(), (dir / "out").c_str(), &o, &r) == CTXREC_OK);
  const long t = ctxrec_report_find_table(r, "summary");
  REQUIRE(t >= 0);
  CHECK(std::string(ctxrec_report_cell(r, t, 0, 1)) == "3");
  ctxrec_report_free(r);

  ctxrec_dataset* d = nullptr;
  REQUIRE(ctxrec_dataset_load((dir / "out").c_str(), &d) == CTXREC_OK);
  CHECK(ctxrec_dataset_example_count(d) == 3);
  CHECK(ctxrec_dataset_core_count(d) == 3);
  ctxrec_dataset_free(d);

  ctxrec::testing::TempDir empty("capi-empty");
  CHECK(ctxrec_extract(empty.path().c_str(), (dir / "out2").c_str(), &o, &r) == CTXREC_ERR_INPUT);
  CHECK(error().find("no sessions found") != std::string::npos);
}
