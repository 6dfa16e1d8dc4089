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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctxrec/evaluation.hpp"
#include "ctxrec/experiment.hpp"
#include "ctxrec/fusion.hpp"
#include "ctxrec/types.hpp"

namespace ctxrec {

struct PersonalizationSplit {
  std::string user_id;
  std::vector<std::size_t> adaptation;  // earlier half
  std::vector<std::size_t> deployment;  // later half
};

// Stable sort of `indices` by timestamp; the first ceil(n/2) go to adaptation.
// Throws InputError for fewer than two examples.
PersonalizationSplit split_user_timeline(std::span<const Example> examples,
                                         std::span<const std::size_t> indices);

struct DeploymentPrediction {
  std::size_t example = 0;
  bool truth = false;
  double universal = 0.5;
  double individual = 0.5;
  double adapted = 0.5;
};

struct PersonalizationLabelResult {
  std::string label;
  std::uint64_t user_positives = 0;        // all of the user's evaluated examples
  std::uint64_t adaptation_positives = 0;
  bool individual_trivial = false;
  CostSelection individual_selection;
  MetricCounts universal, individual, adapted;
  std::vector<DeploymentPrediction> predictions;
  std::vector<std::size_t> individual_training;  // example indices

  MetricReport universal_report() const { return compute_metrics(universal); }
  // Trivial individual models are reported at chance: BA 0.5, F1 0.
  MetricReport individual_report() const;
  MetricReport adapted_report() const { return compute_metrics(adapted); }
};

// Individual EF models are fit on the adaptation half with the usual pipeline;
// the adapted model averages universal and individual probabilities. When the
// individual model is trivial the adapted model is the universal model.
// Every model is evaluated on the annotated deployment examples.
PersonalizationLabelResult evaluate_personalization(std::span<const Example> examples,
                                                    const FusionModel& universal,
                                                    const PersonalizationSplit& split,
                                                    std::string_view label, const PipelineOptions& options);

struct PersonalizationConfig {
  std::vector<std::string> labels;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  TrainOptions train;
  // Labels with at least this many positives form the second average.
  std::uint64_t many_examples_threshold = 300;
};

struct PersonalizationResult {
  std::string user_id;
  PersonalizationSplit split;
  std::vector<std::size_t> universal_training;
  std::vector<PersonalizationLabelResult> labels;
  std::vector<CostChoice> costs;
};

// The user's core-subset examples are split in time. Universal models are
// trained on every user outside the test user's fold (all other users when no
// partition is given).
PersonalizationResult run_personalization(const Dataset& dataset, const FoldPartition* partition,
                                          std::string_view user, const PersonalizationConfig& config);

}  // namespace ctxrec
