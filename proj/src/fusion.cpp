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

#include "ctxrec/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace ctxrec {

Matrix sensor_matrix(std::span<const Example> examples, std::span<const std::size_t> rows, Sensor sensor) {
  const auto d = static_cast<Eigen::Index>(sensor_dim(sensor));
  Matrix m(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto* f = examples[rows[r]].feature(sensor);
    for (Eigen::Index j = 0; j < d; ++j)
      m(static_cast<Eigen::Index>(r), j) = f ? (*f)[static_cast<std::size_t>(j)] : std::nan("");
  }
  return m;
}

Matrix concatenated_matrix(std::span<const Example> examples, std::span<const std::size_t> rows,
                           std::span<const Sensor> sensors) {
  Eigen::Index total = 0;
  for (auto s : sensors) total += static_cast<Eigen::Index>(sensor_dim(s));
  Matrix m(static_cast<Eigen::Index>(rows.size()), total);
  Eigen::Index offset = 0;
  for (auto s : sensors) {
    const auto d = static_cast<Eigen::Index>(sensor_dim(s));
    m.middleCols(offset, d) = sensor_matrix(examples, rows, s);
    offset += d;
  }
  return m;
}

Vector label_vector(std::span<const Example> examples, std::span<const std::size_t> rows,
                    std::string_view label) {
  Vector y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto v = examples[rows[r]].label(label);
    if (v == LabelValue::Missing) throw InputError("label " + std::string(label) + " is missing on a training row");
    y[static_cast<Eigen::Index>(r)] = v == LabelValue::Relevant ? 1.0 : 0.0;
  }
  return y;
}

std::vector<std::size_t> usable_rows(std::span<const Example> examples,
                                     std::span<const std::size_t> candidates, std::string_view label,
                                     std::span<const Sensor> sensors) {
  std::vector<std::size_t> out;
  for (auto i : candidates) {
    const auto& e = examples[i];
    if (e.label(label) == LabelValue::Missing) continue;
    if (std::all_of(sensors.begin(), sensors.end(), [&](Sensor s) { return e.has_features(s); }))
      out.push_back(i);
  }
  return out;
}

SingleSensorModel train_single_sensor(std::span<const Example> examples,
                                      std::span<const std::size_t> candidates, Sensor sensor,
                                      std::string_view label, const PipelineOptions& options) {
  const Sensor only[] = {sensor};
  const auto rows = usable_rows(examples, candidates, label, only);
  SingleSensorModel m;
  m.sensor = sensor;
  m.label = std::string(label);
  m.fit = fit_linear_pipeline(sensor_matrix(examples, rows, sensor), label_vector(examples, rows, label),
                              options);
  return m;
}

std::string_view fusion_variant_name(FusionVariant v) {
  switch (v) {
    case FusionVariant::EarlyFusion: return "ef";
    case FusionVariant::LateAverage: return "lfa";
    case FusionVariant::LateLearned: return "lfl";
  }
  return "?";
}

std::optional<FusionVariant> parse_fusion_variant(std::string_view name) {
  for (auto v : {FusionVariant::EarlyFusion, FusionVariant::LateAverage, FusionVariant::LateLearned})
    if (fusion_variant_name(v) == name) return v;
  return std::nullopt;
}

LateFusionOutput late_fusion_average(std::span<const double> probabilities) {
  if (probabilities.empty()) throw InputError("late fusion needs at least one probability");
  double sum = 0.0;
  for (double p : probabilities) sum += p;
  LateFusionOutput out;
  out.probability = sum / static_cast<double>(probabilities.size());
  out.decision = decide(out.probability);
  out.contributing = probabilities.size();
  return out;
}

std::vector<double> FusionModel::component_probabilities(const Example& example) const {
  std::vector<double> p;
  p.reserve(components.size());
  for (const auto& c : components) {
    const auto* f = example.feature(c.sensor);
    if (!f || !example.has_features(c.sensor))
      throw InputError("example lacks " + std::string(sensor_name(c.sensor)) + " features");
    p.push_back(c.predict_proba(*f));
  }
  return p;
}

LateFusionOutput FusionModel::predict(const Example& example, bool strict) const {
  switch (variant) {
    case FusionVariant::EarlyFusion: {
      for (auto s : sensors)
        if (!example.has_features(s))
          throw InputError("example lacks " + std::string(sensor_name(s)) + " features");
      const Sensor* first = sensors.data();
      const std::size_t idx[] = {0};
      const Example* ex = &example;
      const auto row = concatenated_matrix(std::span(ex, 1), idx, std::span(first, sensors.size()));
      const double p = early.predict_proba(std::span(row.data(), static_cast<std::size_t>(row.size())));
      return {p, decide(p), sensors.size()};
    }
    case FusionVariant::LateAverage: {
      if (strict) return late_fusion_average(component_probabilities(example));
      std::vector<double> p;
      for (const auto& c : components)
        if (example.has_features(c.sensor)) p.push_back(c.predict_proba(*example.feature(c.sensor)));
      if (p.empty()) return {0.5, false, 0};
      return late_fusion_average(p);
    }
    case FusionVariant::LateLearned: {
      const auto p = component_probabilities(example);
      const double q = second_layer.predict_proba(p);
      return {q, decide(q), p.size()};
    }
  }
  throw Error("unknown fusion variant");
}

double FusionModel::predict_proba(const Example& example, bool strict) const {
  return predict(example, strict).probability;
}

std::vector<double> FusionModel::learned_weights() const {
  if (variant != FusionVariant::LateLearned) return {};
  const auto& w = second_layer.model.weights;
  return std::vector<double>(w.data(), w.data() + w.size());
}

bool FusionModel::trivial() const {
  switch (variant) {
    case FusionVariant::EarlyFusion: return early.trivial;
    case FusionVariant::LateAverage:
      return std::all_of(components.begin(), components.end(), [](const auto& c) { return c.fit.trivial; });
    case FusionVariant::LateLearned: return second_layer.trivial;
  }
  return false;
}

FusionModel early_fusion(std::span<const Example> examples, std::span<const std::size_t> candidates,
                         std::string_view label, const PipelineOptions& options,
                         std::span<const Sensor> sensors) {
  const auto rows = usable_rows(examples, candidates, label, sensors);
  if (rows.empty()) throw InputError("no complete-sensor training examples for " + std::string(label));
  FusionModel m;
  m.variant = FusionVariant::EarlyFusion;
  m.label = std::string(label);
  m.sensors.assign(sensors.begin(), sensors.end());
  m.early = fit_linear_pipeline(concatenated_matrix(examples, rows, sensors),
                                label_vector(examples, rows, label), options);
  return m;
}

FusionModel make_late_average(std::vector<SingleSensorModel> components) {
  if (components.empty()) throw ConfigError("late fusion needs at least one component");
  FusionModel m;
  m.variant = FusionVariant::LateAverage;
  m.label = components.front().label;
  for (const auto& c : components) m.sensors.push_back(c.sensor);
  m.components = std::move(components);
  return m;
}

FusionModel late_fusion_learned(std::span<const Example> examples,
                                std::span<const std::size_t> candidates, std::string_view label,
                                std::vector<SingleSensorModel> components,
                                const PipelineOptions& options) {
  FusionModel m = make_late_average(std::move(components));
  m.variant = FusionVariant::LateLearned;
  m.label = std::string(label);
  const auto rows = usable_rows(examples, candidates, label, m.sensors);
  if (rows.empty()) throw InputError("no complete-sensor training examples for " + std::string(label));

  Matrix probs(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.components.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto p = m.component_probabilities(examples[rows[r]]);
    for (std::size_t j = 0; j < p.size(); ++j) probs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = p[j];
  }
  bool all_constant = true;
  for (Eigen::Index j = 0; j < probs.cols() && all_constant; ++j)
    all_constant = (probs.col(j).array() == probs(0, j)).all();
  if (all_constant) throw DegenerateError("degenerate inputs: every component probability is constant");

  auto layer_options = options;
  layer_options.standardize = false;
  m.second_layer = fit_linear_pipeline(probs, label_vector(examples, rows, label), layer_options);
  return m;
}

std::optional<std::size_t> single_class_of(const Example& example, std::span<const std::string> classes,
                                           std::span<const Sensor> sensors) {
  for (auto s : sensors)
    if (!example.has_features(s)) return std::nullopt;
  std::optional<std::size_t> found;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (example.label(classes[c]) != LabelValue::Relevant) continue;
    if (found) return std::nullopt;
    found = c;
  }
  return found;
}

MulticlassModel multiclass_one_vs_rest(std::span<const Example> examples,
                                       std::span<const std::size_t> candidates,
                                       std::vector<std::string> classes, std::vector<Sensor> sensors,
                                       const TrainOptions& options) {
  if (classes.size() < 2) throw ConfigError("multiclass experiment needs at least two classes");
  if (sensors.empty()) throw ConfigError("multiclass experiment needs at least one sensor");
  std::vector<std::size_t> rows;
  std::vector<std::size_t> truth;
  for (auto i : candidates)
    if (auto c = single_class_of(examples[i], classes, sensors)) {
      rows.push_back(i);
      truth.push_back(*c);
    }
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (std::find(truth.begin(), truth.end(), c) == truth.end())
      throw ConfigError("class " + classes[c] + " has no training examples");

  MulticlassModel m;
  m.classes = std::move(classes);
  m.sensors = std::move(sensors);
  const auto x = concatenated_matrix(examples, rows, m.sensors);
  PipelineOptions po;
  po.grid_search = false;
  po.fixed_cost = 1.0;
  po.train = options;
  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    Vector y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) y[static_cast<Eigen::Index>(r)] = truth[r] == c ? 1.0 : 0.0;
    m.per_class.push_back(fit_linear_pipeline(x, y, po));
  }
  return m;
}

std::vector<double> MulticlassModel::class_probabilities(const Example& example) const {
  const std::size_t idx[] = {0};
  const auto row = concatenated_matrix(std::span(&example, 1), idx, sensors);
  const std::span<const double> raw(row.data(), static_cast<std::size_t>(row.size()));
  std::vector<double> p;
  for (const auto& f : per_class) p.push_back(f.predict_proba(raw));
  return p;
}

std::size_t MulticlassModel::predict(const Example& example) const {
  const auto p = class_probabilities(example);
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

ConfusionMatrix evaluate_multiclass(const MulticlassModel& model, std::span<const Example> examples,
                                    std::span<const std::size_t> candidates) {
  std::vector<std::size_t> truth, predicted;
  for (auto i : candidates)
    if (auto c = single_class_of(examples[i], model.classes, model.sensors)) {
      truth.push_back(*c);
      predicted.push_back(model.predict(examples[i]));
    }
  return confusion_matrix(truth, predicted, model.classes);
}

}  // namespace ctxrec
