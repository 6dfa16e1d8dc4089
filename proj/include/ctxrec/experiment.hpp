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
#include <string>
#include <vector>

#include "ctxrec/classifier.hpp"
#include "ctxrec/evaluation.hpp"
#include "ctxrec/types.hpp"

namespace ctxrec {

// The nine evaluated systems: six single-sensor classifiers and three fusions.
enum class SystemKind { Acc, Gyro, WAcc, Loc, Aud, PS, EF, LFA, LFL };

inline constexpr SystemKind kAllSystems[] = {SystemKind::Acc, SystemKind::Gyro, SystemKind::WAcc,
                                             SystemKind::Loc, SystemKind::Aud,  SystemKind::PS,
                                             SystemKind::EF,  SystemKind::LFA,  SystemKind::LFL};

std::string_view system_name(SystemKind s);
std::optional<SystemKind> parse_system(std::string_view name);
// Comma-separated list such as "acc,ef,lfl". Throws ConfigError on unknown
// or repeated names.
std::vector<SystemKind> parse_system_list(std::string_view list);
std::optional<Sensor> system_sensor(SystemKind s);

enum class EvalMode { CrossValidation, LeaveOneUserOut };

std::string_view eval_mode_name(EvalMode m);
std::optional<EvalMode> parse_eval_mode(std::string_view name);

struct EvaluationConfig {
  std::vector<std::string> labels;
  std::vector<SystemKind> systems;
  EvalMode mode = EvalMode::CrossValidation;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::size_t random_sims = kRandomSimulations;
  TrainOptions train;
};

// Cost chosen for one trained component. `component` is a sensor name, "ef"
// or "lfl".
struct CostChoice {
  std::size_t fold = 0;
  std::string label;
  std::string component;
  double cost = 1.0;
  bool fell_back = false;
  bool trivial = false;
};

struct SystemOutcome {
  MetricCounts counts;
  // Folds whose training data lacked one class (or complete examples), so a
  // constant negative classifier was used.
  std::size_t trivial_folds = 0;
};

struct LabelEvaluation {
  std::string label;
  std::uint64_t n_e = 0;        // positives among evaluated examples
  std::size_t n_s = 0;          // users contributing positives
  std::uint64_t n_evaluated = 0;
  std::vector<SystemOutcome> systems;  // config.systems order
  std::vector<MetricReport> random_sims;
  RandomBaseline p99;
};

struct LearnedWeights {
  std::size_t fold = 0;
  std::string label;
  std::vector<double> weights;  // core sensor order
  double intercept = 0.0;
};

struct EvaluationResult {
  EvaluationConfig config;
  std::vector<std::vector<std::string>> folds;
  std::vector<LabelEvaluation> labels;
  std::vector<CostChoice> costs;
  std::vector<LearnedWeights> learned_weights;

  MetricReport report(std::size_t label, std::size_t system) const;
  // Mean over labels of the metric. With defined_only, labels where the metric
  // is undefined (F1 without a defined value) are skipped instead of counted
  // as 0 (F1) or causing an empty result (other metrics).
  std::optional<double> average(std::size_t system, Metric m, bool defined_only = false) const;
  // p99 of the label-averaged metric across the simulated random classifiers.
  std::optional<double> average_p99(Metric m, bool defined_only = false) const;
};

// Test examples are the core-sensor subset of each held-out fold with the
// label annotated; counts are summed over folds before metrics are computed.
// LOO ignores `partition`, treats each user as a fold and fixes C = 1.
// Throws ConfigError for labels outside the dataset vocabulary.
EvaluationResult evaluate_systems(const Dataset& dataset, const FoldPartition* partition,
                                  const EvaluationConfig& config);

// Users of the dataset as single-user folds, in user order.
FoldPartition leave_one_user_out(const Dataset& dataset);

// Example indices of users outside `fold`.
std::vector<std::size_t> training_indices(const Dataset& dataset, const FoldPartition& partition,
                                          std::size_t fold);

}  // namespace ctxrec
