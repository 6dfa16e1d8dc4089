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

#include "ctxrec/personalization.hpp"

#include <algorithm>

#include "ctxrec/rng.hpp"
#include "parallel.hpp"

namespace ctxrec {

PersonalizationSplit split_user_timeline(std::span<const Example> examples,
                                         std::span<const std::size_t> indices) {
  if (indices.size() < 2) throw InputError("personalization needs at least two examples");
  std::vector<std::size_t> order(indices.begin(), indices.end());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return examples[a].timestamp < examples[b].timestamp;
  });
  PersonalizationSplit split;
  split.user_id = examples[order.front()].user_id;
  const auto half = (order.size() + 1) / 2;
  split.adaptation.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half));
  split.deployment.assign(order.begin() + static_cast<std::ptrdiff_t>(half), order.end());
  return split;
}

MetricReport PersonalizationLabelResult::individual_report() const {
  if (!individual_trivial) return compute_metrics(individual);
  MetricReport r;
  r.balanced_accuracy = 0.5;
  r.f1 = 0.0;
  r.f1_defined = false;
  return r;
}

namespace {

FusionModel trivial_early_fusion(std::string_view label) {
  FusionModel m;
  m.variant = FusionVariant::EarlyFusion;
  m.label = std::string(label);
  m.sensors.assign(kAllSensors.begin(), kAllSensors.end());
  m.early.trivial = true;
  m.early.model = trivial_linear_model(kEarlyFusionDim, false);
  m.early.standardizer = Standardizer(std::vector<double>(kEarlyFusionDim, 0.0),
                                      std::vector<double>(kEarlyFusionDim, 1.0));
  return m;
}

FusionModel early_fusion_or_trivial(std::span<const Example> examples, std::span<const std::size_t> rows,
                                    std::string_view label, const PipelineOptions& options) {
  try {
    return early_fusion(examples, rows, label, options);
  } catch (const InputError&) {
    return trivial_early_fusion(label);
  }
}

}  // namespace

PersonalizationLabelResult evaluate_personalization(std::span<const Example> examples,
                                                    const FusionModel& universal,
                                                    const PersonalizationSplit& split,
                                                    std::string_view label,
                                                    const PipelineOptions& options) {
  if (universal.variant != FusionVariant::EarlyFusion) throw ConfigError("universal model must be early fusion");
  PersonalizationLabelResult r;
  r.label = std::string(label);
  r.individual_training = usable_rows(examples, split.adaptation, label, kAllSensors);
  for (auto i : r.individual_training)
    if (examples[i].label(label) == LabelValue::Relevant) ++r.adaptation_positives;

  const auto individual = early_fusion_or_trivial(examples, r.individual_training, label, options);
  r.individual_trivial = individual.trivial();
  r.individual_selection = individual.early.selection;

  for (auto i : usable_rows(examples, split.deployment, label, kAllSensors)) {
    const auto& e = examples[i];
    DeploymentPrediction p;
    p.example = i;
    p.truth = e.label(label) == LabelValue::Relevant;
    p.universal = universal.predict_proba(e);
    p.individual = individual.predict_proba(e);
    const double pair[] = {p.universal, p.individual};
    p.adapted = r.individual_trivial ? p.universal : late_fusion_average(pair).probability;
    r.universal.add(p.truth, decide(p.universal));
    r.individual.add(p.truth, decide(p.individual));
    r.adapted.add(p.truth, decide(p.adapted));
    r.predictions.push_back(p);
  }
  return r;
}

PersonalizationResult run_personalization(const Dataset& dataset, const FoldPartition* partition,
                                          std::string_view user, const PersonalizationConfig& config) {
  if (!dataset.has_user(user)) throw ConfigError("unknown user: " + std::string(user));
  if (config.labels.empty()) throw ConfigError("no labels requested");
  for (const auto& l : config.labels)
    if (!dataset.has_label(l)) throw ConfigError("label not in dataset vocabulary: " + l);

  const auto examples = dataset.examples();
  const auto own = core_subset(examples, dataset.user_examples(user));
  if (own.size() < 2)
    throw ConfigError("user " + std::string(user) + " has fewer than two complete-sensor examples");

  PersonalizationResult result;
  result.user_id = std::string(user);
  result.split = split_user_timeline(examples, own);

  if (partition) {
    validate_partition(*partition);
    const int fold = partition->fold_of(user);
    if (fold < 0) throw ConfigError("user " + std::string(user) + " is not in the partition");
    result.universal_training = training_indices(dataset, *partition, static_cast<std::size_t>(fold));
  } else {
    for (const auto& u : dataset.users()) {
      if (u == user) continue;
      const auto idx = dataset.user_examples(u);
      result.universal_training.insert(result.universal_training.end(), idx.begin(), idx.end());
    }
    std::sort(result.universal_training.begin(), result.universal_training.end());
  }

  const auto n = config.labels.size();
  std::vector<PersonalizationLabelResult> per_label(n);
  std::vector<FusionModel> universals(n);
  detail::parallel_for(n, config.jobs, [&](std::size_t l) {
    const auto& label = config.labels[l];
    PipelineOptions po;
    po.train = config.train;
    po.seed = derive_seed(config.seed, {l, 0});
    universals[l] = early_fusion_or_trivial(examples, result.universal_training, label, po);
    po.seed = derive_seed(config.seed, {l, 1});
    per_label[l] = evaluate_personalization(examples, universals[l], result.split, label, po);
    for (auto i : own)
      if (examples[i].label(label) == LabelValue::Relevant) ++per_label[l].user_positives;
  });

  for (std::size_t l = 0; l < n; ++l) {
    const auto& u = universals[l].early;
    result.costs.push_back({0, config.labels[l], "universal_ef", u.selection.cost, u.selection.fell_back, u.trivial});
    const auto& r = per_label[l];
    result.costs.push_back({0, config.labels[l], "individual_ef", r.individual_selection.cost,
                            r.individual_selection.fell_back, r.individual_trivial});
    result.labels.push_back(std::move(per_label[l]));
  }
  return result;
}

}  // namespace ctxrec
