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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctxrec/types.hpp"

namespace ctxrec {

struct MetricCounts {
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;

  void add(bool truth, bool predicted) {
    if (truth) (predicted ? tp : fn)++;
    else (predicted ? fp : tn)++;
  }
  std::uint64_t total() const { return tp + tn + fp + fn; }
  MetricCounts& operator+=(const MetricCounts& o) {
    tp += o.tp, tn += o.tn, fp += o.fp, fn += o.fn;
    return *this;
  }
  bool operator==(const MetricCounts&) const = default;
};

// Ratios that would divide by zero are empty. F1 follows the harmonic-mean
// definition; when it is undefined it is reported as 0 with f1_defined false.
struct MetricReport {
  std::optional<double> accuracy;
  std::optional<double> tpr;
  std::optional<double> tnr;
  std::optional<double> precision;
  std::optional<double> balanced_accuracy;
  double f1 = 0.0;
  bool f1_defined = false;
};

MetricReport compute_metrics(const MetricCounts& counts);

enum class Metric { Accuracy, Tpr, Tnr, Precision, BalancedAccuracy, F1 };

std::optional<Metric> parse_metric(std::string_view name);
std::string_view metric_name(Metric m);
// F1 yields its reported value (0 when undefined); other metrics may be empty.
std::optional<double> metric_value(const MetricReport& report, Metric m);

enum class Platform { IPhone, Android };

struct UserPlatform {
  std::string user_id;
  Platform platform = Platform::IPhone;
};

struct FoldPartition {
  std::vector<std::vector<std::string>> folds;
  std::uint64_t seed = 0;

  std::size_t fold_count() const { return folds.size(); }
  // Index of the fold holding `user`, or -1.
  int fold_of(std::string_view user) const;
  std::vector<std::string> all_users() const;
};

// Throws InputError when folds overlap (naming the user) or a fold is empty.
void validate_partition(const FoldPartition& partition);

// Shuffles each platform group with the seed and deals users round-robin,
// continuing the Android deal where the iPhone deal stopped so fold sizes and
// platform shares stay within one user of each other.
FoldPartition partition_folds(std::span<const UserPlatform> users, std::size_t k, std::uint64_t seed);

inline constexpr std::size_t kRandomSimulations = 100;
inline constexpr double kRandomPercentile = 0.99;

// Linear-interpolated percentile, q in [0, 1].
double percentile_of(std::vector<double> values, double q);

// Metric reports of `n_sims` coin-flip classifiers over n_positive positives
// and n_total - n_positive negatives. Simulation s uses a stream derived from
// (seed, s).
std::vector<MetricReport> simulate_random_classifier(std::uint64_t n_positive, std::uint64_t n_total,
                                                     std::size_t n_sims, std::uint64_t seed);

struct RandomBaseline {
  std::optional<double> accuracy, tpr, tnr, precision, balanced_accuracy, f1;

  std::optional<double> get(Metric m) const;
};

RandomBaseline random_baseline_p99(std::uint64_t n_positive, std::uint64_t n_total,
                                   std::size_t n_sims = kRandomSimulations, std::uint64_t seed = 0);

struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<std::vector<std::uint64_t>> counts;
  // Row-normalized; empty for classes without examples.
  std::vector<std::optional<std::vector<double>>> rows;
};

// truth/predicted hold class indices into `classes`.
ConfusionMatrix confusion_matrix(std::span<const std::size_t> truth,
                                 std::span<const std::size_t> predicted,
                                 std::vector<std::string> classes);

}  // namespace ctxrec
