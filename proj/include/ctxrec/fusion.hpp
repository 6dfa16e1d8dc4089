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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctxrec/classifier.hpp"
#include "ctxrec/evaluation.hpp"
#include "ctxrec/types.hpp"

namespace ctxrec {

// Rows of raw sensor features (NaN where masked) for the given examples.
Matrix sensor_matrix(std::span<const Example> examples, std::span<const std::size_t> rows, Sensor sensor);
// Concatenation of several sensors' raw features, in the given sensor order.
Matrix concatenated_matrix(std::span<const Example> examples, std::span<const std::size_t> rows,
                           std::span<const Sensor> sensors);
// 1/0 targets; every row must have a non-missing label.
Vector label_vector(std::span<const Example> examples, std::span<const std::size_t> rows,
                    std::string_view label);

// Examples from `candidates` with a non-missing label and all `sensors` present.
std::vector<std::size_t> usable_rows(std::span<const Example> examples,
                                     std::span<const std::size_t> candidates, std::string_view label,
                                     std::span<const Sensor> sensors);

// Trained on every candidate example where the sensor is present and the label
// is annotated.
SingleSensorModel train_single_sensor(std::span<const Example> examples,
                                      std::span<const std::size_t> candidates, Sensor sensor,
                                      std::string_view label, const PipelineOptions& options);

enum class FusionVariant { EarlyFusion, LateAverage, LateLearned };

std::string_view fusion_variant_name(FusionVariant v);
std::optional<FusionVariant> parse_fusion_variant(std::string_view name);

struct LateFusionOutput {
  double probability = 0.5;
  bool decision = false;
  // Lenient mode only: number of sensors that contributed.
  std::size_t contributing = 0;
};

// Arithmetic mean of the probabilities; decision is mean > 0.5.
LateFusionOutput late_fusion_average(std::span<const double> probabilities);

class FusionModel {
 public:
  FusionVariant variant = FusionVariant::EarlyFusion;
  std::string label;
  std::vector<Sensor> sensors;
  FittedLinear early;                         // EarlyFusion
  std::vector<SingleSensorModel> components;  // LateAverage, LateLearned
  FittedLinear second_layer;                  // LateLearned, over raw probabilities

  // Strict mode requires every sensor of the model on the example; lenient
  // late averaging uses whatever components have data.
  double predict_proba(const Example& example, bool strict = true) const;
  LateFusionOutput predict(const Example& example, bool strict = true) const;
  // Per-component probabilities (late variants), in `sensors` order.
  std::vector<double> component_probabilities(const Example& example) const;
  // Second-layer weights of LateLearned, in `sensors` order.
  std::vector<double> learned_weights() const;
  bool trivial() const;
};

// Linear model over the standardized concatenation of `sensors`, trained on
// candidates that have all of them. Throws InputError when there are none.
FusionModel early_fusion(std::span<const Example> examples, std::span<const std::size_t> candidates,
                         std::string_view label, const PipelineOptions& options,
                         std::span<const Sensor> sensors = kAllSensors);

FusionModel make_late_average(std::vector<SingleSensorModel> components);

// Second-layer logistic model over the components' probabilities on complete
// training examples. Throws DegenerateError("degenerate inputs") when every
// probability column is constant.
FusionModel late_fusion_learned(std::span<const Example> examples,
                                std::span<const std::size_t> candidates, std::string_view label,
                                std::vector<SingleSensorModel> components,
                                const PipelineOptions& options);

// One-vs-rest multiclass model over the early-fusion features of `sensors`.
struct MulticlassModel {
  std::vector<std::string> classes;
  std::vector<Sensor> sensors;
  std::vector<FittedLinear> per_class;

  std::vector<double> class_probabilities(const Example& example) const;
  std::size_t predict(const Example& example) const;
};

// Class index when exactly one of `classes` is relevant and all sensors are
// present; otherwise empty.
std::optional<std::size_t> single_class_of(const Example& example, std::span<const std::string> classes,
                                           std::span<const Sensor> sensors);

// Fixed cost 1, no grid search. Throws ConfigError naming a class without
// training examples.
MulticlassModel multiclass_one_vs_rest(std::span<const Example> examples,
                                       std::span<const std::size_t> candidates,
                                       std::vector<std::string> classes, std::vector<Sensor> sensors,
                                       const TrainOptions& options = {});

ConfusionMatrix evaluate_multiclass(const MulticlassModel& model, std::span<const Example> examples,
                                    std::span<const std::size_t> candidates);

}  // namespace ctxrec
