/* Copyright 2026 The ctxrec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of libctxrec. All handles are opaque and owned by the caller
 * once returned; free them with the matching *_free function. Functions
 * return a ctxrec_status; on failure ctxrec_last_error() describes the
 * problem for the calling thread. Strings returned by accessors stay valid
 * until the owning handle is freed. */

#ifndef CTXREC_CTXREC_H
#define CTXREC_CTXREC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CTXREC_API __declspec(dllexport)
#else
#define CTXREC_API __attribute__((visibility("default")))
#endif

typedef enum ctxrec_status {
  CTXREC_OK = 0,
  CTXREC_ERR_INPUT = 2,      /* unreadable or malformed input */
  CTXREC_ERR_CONFIG = 3,     /* bad option, unknown label/user/system */
  CTXREC_ERR_INTERNAL = 4,   /* invariant violation */
  CTXREC_ERR_DEGENERATE = 5, /* single-class or constant training data */
  CTXREC_ERR_ARGUMENT = 6    /* null pointer or out-of-range argument */
} ctxrec_status;

typedef enum ctxrec_sensor {
  CTXREC_SENSOR_ACC = 0,
  CTXREC_SENSOR_GYRO = 1,
  CTXREC_SENSOR_WACC = 2,
  CTXREC_SENSOR_LOC = 3,
  CTXREC_SENSOR_AUD = 4,
  CTXREC_SENSOR_PS = 5
} ctxrec_sensor;

#define CTXREC_NUM_SENSORS 6
#define CTXREC_EARLY_FUSION_DIM 175

typedef struct ctxrec_dataset ctxrec_dataset;
typedef struct ctxrec_partition ctxrec_partition;
typedef struct ctxrec_report ctxrec_report;
typedef struct ctxrec_model ctxrec_model;

CTXREC_API const char* ctxrec_version(void);
CTXREC_API const char* ctxrec_last_error(void);
CTXREC_API const char* ctxrec_status_name(ctxrec_status status);

/* ---- metrics ---------------------------------------------------------- */

typedef struct ctxrec_counts {
  uint64_t tp, tn, fp, fn;
} ctxrec_counts;

/* Undefined ratios are NaN. f1 is 0 when undefined, with f1_defined = 0. */
typedef struct ctxrec_metrics {
  double accuracy, tpr, tnr, precision, balanced_accuracy, f1;
  int f1_defined;
} ctxrec_metrics;

CTXREC_API ctxrec_status ctxrec_compute_metrics(const ctxrec_counts* counts, ctxrec_metrics* out);

/* 99th percentile of each metric over n_sims coin-flip classifiers. */
CTXREC_API ctxrec_status ctxrec_random_baseline_p99(uint64_t n_positive, uint64_t n_total, size_t n_sims,
                                                    uint64_t seed, ctxrec_metrics* out);

/* ---- features --------------------------------------------------------- */

CTXREC_API size_t ctxrec_sensor_dim(ctxrec_sensor sensor);
CTXREC_API const char* ctxrec_sensor_name(ctxrec_sensor sensor);
/* Name of feature column `index` of a sensor, or NULL when out of range. */
CTXREC_API const char* ctxrec_feature_column(ctxrec_sensor sensor, size_t index);

/* Features of one triaxial recording (acc in G, gyro in rad/s, wacc in mG).
 * `xyz` holds n interleaved samples. `values` and `mask` (1 = missing) must
 * hold ctxrec_sensor_dim(sensor) entries. */
CTXREC_API ctxrec_status ctxrec_extract_triaxial(ctxrec_sensor sensor, const double* t, const double* xyz,
                                                 size_t n, double nominal_rate, double* values,
                                                 unsigned char* mask);

/* Writes the 8 time-of-day indicators for an hour in [0, 23]. */
CTXREC_API ctxrec_status ctxrec_time_of_day_bins(int hour, unsigned char out[8]);

typedef struct ctxrec_extract_options {
  int has_utc_offset;       /* must be nonzero */
  int utc_offset_minutes;   /* minutes east of UTC */
  const char* anchors_path; /* optional place anchors for label cleaning */
  int clean_colabels;       /* apply co-label corrections */
} ctxrec_extract_options;

/* Reads every session bundle under input_dir and writes one feature table
 * per user to output_dir. The report's "summary" table lists per-user counts. */
CTXREC_API ctxrec_status ctxrec_extract(const char* input_dir, const char* output_dir,
                                        const ctxrec_extract_options* options, ctxrec_report** out);

/* Canonical dataset label name ("Lying down" and "label:LYING_DOWN" both map
 * to LYING_DOWN). The returned string lives until the next call on the same
 * thread. */
CTXREC_API const char* ctxrec_canonical_label(const char* name);

/* ---- datasets and partitions ----------------------------------------- */

CTXREC_API ctxrec_status ctxrec_dataset_load(const char* features_dir, ctxrec_dataset** out);
CTXREC_API void ctxrec_dataset_free(ctxrec_dataset* dataset);
CTXREC_API size_t ctxrec_dataset_example_count(const ctxrec_dataset* dataset);
CTXREC_API size_t ctxrec_dataset_core_count(const ctxrec_dataset* dataset);
CTXREC_API size_t ctxrec_dataset_user_count(const ctxrec_dataset* dataset);
CTXREC_API const char* ctxrec_dataset_user(const ctxrec_dataset* dataset, size_t index);
CTXREC_API size_t ctxrec_dataset_label_count(const ctxrec_dataset* dataset);
CTXREC_API const char* ctxrec_dataset_label(const ctxrec_dataset* dataset, size_t index);
CTXREC_API size_t ctxrec_dataset_warning_count(const ctxrec_dataset* dataset);
CTXREC_API const char* ctxrec_dataset_warning(const ctxrec_dataset* dataset, size_t index);
/* FNV-1a hash of the loaded files. */
CTXREC_API uint64_t ctxrec_dataset_hash(const ctxrec_dataset* dataset);

CTXREC_API ctxrec_status ctxrec_partition_load(const char* path, ctxrec_partition** out);
/* Platform file lines: "<user> <iphone|android>". */
CTXREC_API ctxrec_status ctxrec_partition_generate(const char* platforms_path, size_t k, uint64_t seed,
                                                   ctxrec_partition** out);
CTXREC_API ctxrec_status ctxrec_partition_save(const ctxrec_partition* partition, const char* path);
CTXREC_API void ctxrec_partition_free(ctxrec_partition* partition);
CTXREC_API size_t ctxrec_partition_fold_count(const ctxrec_partition* partition);
CTXREC_API size_t ctxrec_partition_fold_size(const ctxrec_partition* partition, size_t fold);
CTXREC_API const char* ctxrec_partition_user(const ctxrec_partition* partition, size_t fold, size_t index);

/* ---- experiments ------------------------------------------------------ */

typedef enum ctxrec_mode { CTXREC_MODE_CV = 0, CTXREC_MODE_LOO = 1 } ctxrec_mode;

typedef struct ctxrec_evaluate_options {
  const char* const* labels; /* canonical label names */
  size_t n_labels;
  const char* systems;       /* e.g. "acc,gyro,ef,lfa,lfl" */
  ctxrec_mode mode;
  uint64_t seed;
  unsigned jobs;             /* 0 or 1 runs serially */
  const char* metric;        /* accuracy, tpr, tnr, precision, ba, f1; NULL = ba */
} ctxrec_evaluate_options;

/* Report tables: "results", "costs", "lfl_weights". The partition may be NULL
 * in LOO mode. */
CTXREC_API ctxrec_status ctxrec_evaluate(const ctxrec_dataset* dataset, const ctxrec_partition* partition,
                                         const ctxrec_evaluate_options* options, ctxrec_report** out);

typedef struct ctxrec_personalize_options {
  const char* user;
  const char* const* labels;
  size_t n_labels;
  uint64_t seed;
  unsigned jobs;
  uint64_t many_examples_threshold; /* 0 selects 300 */
} ctxrec_personalize_options;

/* Report tables: "personalization", "costs", "predictions". */
CTXREC_API ctxrec_status ctxrec_personalize(const ctxrec_dataset* dataset, const ctxrec_partition* partition,
                                            const ctxrec_personalize_options* options, ctxrec_report** out);

typedef struct ctxrec_confusion_options {
  const char* const* classes;
  size_t n_classes;
  const char* sensors; /* e.g. "acc,wacc"; NULL = all six */
} ctxrec_confusion_options;

/* One-vs-rest multiclass model per fold; counts summed over held-out folds.
 * Report table: "confusion". */
CTXREC_API ctxrec_status ctxrec_confusion(const ctxrec_dataset* dataset, const ctxrec_partition* partition,
                                          const ctxrec_confusion_options* options, ctxrec_report** out);

/* ---- reports ---------------------------------------------------------- */

CTXREC_API void ctxrec_report_free(ctxrec_report* report);
CTXREC_API size_t ctxrec_report_table_count(const ctxrec_report* report);
CTXREC_API const char* ctxrec_report_table_name(const ctxrec_report* report, size_t table);
/* Table index by name, or -1. */
CTXREC_API long ctxrec_report_find_table(const ctxrec_report* report, const char* name);
CTXREC_API size_t ctxrec_report_rows(const ctxrec_report* report, size_t table);
CTXREC_API size_t ctxrec_report_cols(const ctxrec_report* report, size_t table);
CTXREC_API const char* ctxrec_report_header(const ctxrec_report* report, size_t table, size_t col);
CTXREC_API const char* ctxrec_report_cell(const ctxrec_report* report, size_t table, size_t row, size_t col);
CTXREC_API const char* ctxrec_report_csv(const ctxrec_report* report, size_t table);
CTXREC_API const char* ctxrec_report_markdown(const ctxrec_report* report, size_t table);
/* JSON object with seeds, chosen costs, dataset hash and timing. */
CTXREC_API const char* ctxrec_report_details_json(const ctxrec_report* report);

/* ---- models ----------------------------------------------------------- */

typedef struct ctxrec_train_options {
  const char* label;
  const char* system; /* acc..ps, ef, lfa or lfl */
  uint64_t seed;
  int fixed_cost;     /* nonzero: skip grid search and use cost */
  double cost;
} ctxrec_train_options;

/* Trains on every example of the dataset. */
CTXREC_API ctxrec_status ctxrec_model_train(const ctxrec_dataset* dataset, const ctxrec_train_options* options,
                                            ctxrec_model** out);
CTXREC_API ctxrec_status ctxrec_model_load(const char* path, ctxrec_model** out);
CTXREC_API ctxrec_status ctxrec_model_save(const ctxrec_model* model, const char* path);
CTXREC_API void ctxrec_model_free(ctxrec_model* model);
/* "single", "ef", "lfa" or "lfl". */
CTXREC_API const char* ctxrec_model_kind(const ctxrec_model* model);
CTXREC_API const char* ctxrec_model_label(const ctxrec_model* model);

/* `features[s]` points at ctxrec_sensor_dim(s) values (NaN = missing) or is
 * NULL when the sensor is absent. Strict: every sensor the model uses must be
 * present. */
CTXREC_API ctxrec_status ctxrec_model_predict(const ctxrec_model* model,
                                              const double* const features[CTXREC_NUM_SENSORS],
                                              double* probability);

#ifdef __cplusplus
}
#endif

#endif /* CTXREC_CTXREC_H */
