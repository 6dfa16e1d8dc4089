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

#include "ctxrec/experiment.hpp"

#include <algorithm>
#include <set>

#include "ctxrec/fusion.hpp"
#include "ctxrec/rng.hpp"
#include "parallel.hpp"

namespace ctxrec {

namespace {

constexpr std::pair<SystemKind, std::string_view> kSystemNames[] = {
    {SystemKind::Acc, "acc"}, {SystemKind::Gyro, "gyro"}, {SystemKind::WAcc, "wacc"},
    {SystemKind::Loc, "loc"}, {SystemKind::Aud, "aud"},   {SystemKind::PS, "ps"},
    {SystemKind::EF, "ef"},   {SystemKind::LFA, "lfa"},   {SystemKind::LFL, "lfl"},
};

// Slots per (fold, label): six sensors, then EF.
constexpr std::size_t kEfSlot = kAllSensors.size();
constexpr std::size_t kSlotsPerTask = kEfSlot + 1;
constexpr std::uint64_t kLflSalt = 7;
constexpr std::uint64_t kRandomSalt = 0x72616e64;

FittedLinear trivial_negative(std::size_t dim, bool standardized) {
  FittedLinear f;
  f.trivial = true;
  f.standardized = standardized;
  f.model = trivial_linear_model(dim, false);
  if (standardized) f.standardizer = Standardizer(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0));
  return f;
}

struct Slot {
  SingleSensorModel single;
  FusionModel fused;
  bool used = false;
};

struct TaskOutput {
  std::vector<SystemOutcome> outcomes;
  std::uint64_t positives = 0, evaluated = 0;
  std::set<std::string> positive_users;
  std::optional<LearnedWeights> weights;
  std::optional<CostChoice> lfl_cost;
};

}  // namespace

std::string_view system_name(SystemKind s) {
  for (auto [k, n] : kSystemNames)
    if (k == s) return n;
  return "?";
}

std::optional<SystemKind> parse_system(std::string_view name) {
  for (auto [k, n] : kSystemNames)
    if (n == name) return k;
  return std::nullopt;
}

std::vector<SystemKind> parse_system_list(std::string_view list) {
  std::vector<SystemKind> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    auto token = list.substr(start, end - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) {
      auto s = parse_system(token);
      if (!s) throw ConfigError("unknown system: " + std::string(token));
      if (std::find(out.begin(), out.end(), *s) != out.end())
        throw ConfigError("system listed twice: " + std::string(token));
      out.push_back(*s);
    }
    start = end + 1;
  }
  if (out.empty()) throw ConfigError("no systems requested");
  return out;
}

std::optional<Sensor> system_sensor(SystemKind s) {
  const auto i = static_cast<std::size_t>(s);
  if (i < kAllSensors.size()) return kAllSensors[i];
  return std::nullopt;
}

std::string_view eval_mode_name(EvalMode m) { return m == EvalMode::CrossValidation ? "cv5" : "loo"; }

std::optional<EvalMode> parse_eval_mode(std::string_view name) {
  if (name == "cv5" || name == "cv") return EvalMode::CrossValidation;
  if (name == "loo") return EvalMode::LeaveOneUserOut;
  return std::nullopt;
}

MetricReport EvaluationResult::report(std::size_t label, std::size_t system) const {
  return compute_metrics(labels.at(label).systems.at(system).counts);
}

namespace {

std::optional<double> mean_of(const std::vector<MetricReport>& reports, Metric m, bool defined_only) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : reports) {
    if (m == Metric::F1) {
      if (defined_only && !r.f1_defined) continue;
      sum += r.f1;
      ++n;
      continue;
    }
    const auto v = metric_value(r, m);
    if (!v) {
      if (defined_only) continue;
      return std::nullopt;
    }
    sum += *v;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace

std::optional<double> EvaluationResult::average(std::size_t system, Metric m, bool defined_only) const {
  std::vector<MetricReport> reports;
  for (std::size_t l = 0; l < labels.size(); ++l) reports.push_back(report(l, system));
  return mean_of(reports, m, defined_only);
}

std::optional<double> EvaluationResult::average_p99(Metric m, bool defined_only) const {
  std::size_t sims = 0;
  for (const auto& l : labels) sims = std::max(sims, l.random_sims.size());
  std::vector<double> averages;
  for (std::size_t s = 0; s < sims; ++s) {
    std::vector<MetricReport> reports;
    for (const auto& l : labels)
      if (s < l.random_sims.size()) reports.push_back(l.random_sims[s]);
    if (auto v = mean_of(reports, m, defined_only)) averages.push_back(*v);
  }
  if (averages.empty()) return std::nullopt;
  return percentile_of(std::move(averages), kRandomPercentile);
}

FoldPartition leave_one_user_out(const Dataset& dataset) {
  FoldPartition p;
  for (const auto& u : dataset.users()) p.folds.push_back({u});
  if (p.folds.empty()) throw InputError("dataset has no users");
  return p;
}

std::vector<std::size_t> training_indices(const Dataset& dataset, const FoldPartition& partition,
                                          std::size_t fold) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < partition.folds.size(); ++f) {
    if (f == fold) continue;
    for (const auto& u : partition.folds[f]) {
      const auto idx = dataset.user_examples(u);
      out.insert(out.end(), idx.begin(), idx.end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

EvaluationResult evaluate_systems(const Dataset& dataset, const FoldPartition* partition,
                                  const EvaluationConfig& config) {
  if (config.labels.empty()) throw ConfigError("no labels requested");
  if (config.systems.empty()) throw ConfigError("no systems requested");
  for (const auto& l : config.labels)
    if (!dataset.has_label(l)) throw ConfigError("label not in dataset vocabulary: " + l);

  const bool loo = config.mode == EvalMode::LeaveOneUserOut;
  FoldPartition folds;
  if (loo) {
    folds = leave_one_user_out(dataset);
  } else {
    if (!partition) throw ConfigError("cross-validation needs a fold partition");
    validate_partition(*partition);
    folds = *partition;
  }
  const auto examples = dataset.examples();
  const auto n_folds = folds.folds.size();
  const auto n_labels = config.labels.size();

  std::vector<std::vector<std::size_t>> train(n_folds), test(n_folds);
  for (std::size_t f = 0; f < n_folds; ++f) {
    train[f] = training_indices(dataset, folds, f);
    std::vector<std::size_t> held;
    for (const auto& u : folds.folds[f]) {
      const auto idx = dataset.user_examples(u);
      held.insert(held.end(), idx.begin(), idx.end());
    }
    std::sort(held.begin(), held.end());
    test[f] = core_subset(examples, held);
  }

  auto wants = [&](SystemKind s) {
    return std::find(config.systems.begin(), config.systems.end(), s) != config.systems.end();
  };
  const bool late = wants(SystemKind::LFA) || wants(SystemKind::LFL);
  std::array<bool, kSlotsPerTask> needed{};
  for (std::size_t s = 0; s < kAllSensors.size(); ++s)
    needed[s] = late || wants(static_cast<SystemKind>(s));
  needed[kEfSlot] = wants(SystemKind::EF);

  auto pipeline_options = [&](std::uint64_t seed) {
    PipelineOptions po;
    po.grid_search = !loo;
    po.fixed_cost = 1.0;
    po.seed = seed;
    po.train = config.train;
    return po;
  };

  // Phase 1: independent (fold, label, component) training tasks.
  std::vector<std::size_t> slot_ids;
  for (std::size_t t = 0; t < n_folds * n_labels; ++t)
    for (std::size_t s = 0; s < kSlotsPerTask; ++s)
      if (needed[s]) slot_ids.push_back(t * kSlotsPerTask + s);
  std::vector<Slot> slots(n_folds * n_labels * kSlotsPerTask);
  detail::parallel_for(slot_ids.size(), config.jobs, [&](std::size_t i) {
    const auto id = slot_ids[i];
    const auto task = id / kSlotsPerTask, s = id % kSlotsPerTask;
    const auto fold = task / n_labels, label = task % n_labels;
    const auto& name = config.labels[label];
    const auto po = pipeline_options(derive_seed(config.seed, {fold, label, s}));
    auto& slot = slots[id];
    slot.used = true;
    if (s < kEfSlot) {
      slot.single = train_single_sensor(examples, train[fold], kAllSensors[s], name, po);
      return;
    }
    try {
      slot.fused = early_fusion(examples, train[fold], name, po);
    } catch (const InputError&) {
      slot.fused.variant = FusionVariant::EarlyFusion;
      slot.fused.label = name;
      slot.fused.sensors.assign(kAllSensors.begin(), kAllSensors.end());
      slot.fused.early = trivial_negative(kEarlyFusionDim, true);
    }
  });

  // Phase 2: per (fold, label) second layer and test-fold counting.
  std::vector<TaskOutput> outputs(n_folds * n_labels);
  detail::parallel_for(outputs.size(), config.jobs, [&](std::size_t task) {
    const auto fold = task / n_labels, label = task % n_labels;
    const auto& name = config.labels[label];
    auto slot = [&](std::size_t s) -> Slot& { return slots[task * kSlotsPerTask + s]; };
    auto& out = outputs[task];

    std::optional<FusionModel> lfa, lfl;
    bool lfl_trivial = false;
    if (late) {
      std::vector<SingleSensorModel> comps;
      for (std::size_t s = 0; s < kAllSensors.size(); ++s) comps.push_back(slot(s).single);
      if (wants(SystemKind::LFL)) {
        const auto po = pipeline_options(derive_seed(config.seed, {fold, label, kLflSalt}));
        try {
          lfl = late_fusion_learned(examples, train[fold], name, comps, po);
        } catch (const Error&) {
          // No complete training examples or constant inputs.
          lfl = make_late_average(comps);
          lfl->variant = FusionVariant::LateLearned;
          lfl->second_layer = trivial_negative(kAllSensors.size(), false);
        }
        lfl_trivial = lfl->trivial();
        const auto& m = lfl->second_layer.model;
        out.weights = LearnedWeights{fold, name, lfl->learned_weights(), m.intercept};
        out.lfl_cost = CostChoice{fold, name, "lfl", lfl->second_layer.selection.cost,
                                  lfl->second_layer.selection.fell_back, lfl_trivial};
      }
      lfa = make_late_average(std::move(comps));
    }

    out.outcomes.resize(config.systems.size());
    for (std::size_t k = 0; k < config.systems.size(); ++k) {
      const auto sys = config.systems[k];
      bool trivial = false;
      if (auto s = system_sensor(sys)) trivial = slot(sensor_index(*s)).single.fit.trivial;
      else if (sys == SystemKind::EF) trivial = slot(kEfSlot).fused.trivial();
      else if (sys == SystemKind::LFA) trivial = lfa->trivial();
      else trivial = lfl_trivial;
      out.outcomes[k].trivial_folds = trivial ? 1 : 0;
    }

    for (auto i : test[fold]) {
      const auto& e = examples[i];
      const auto v = e.label(name);
      if (v == LabelValue::Missing) continue;
      const bool truth = v == LabelValue::Relevant;
      ++out.evaluated;
      if (truth) {
        ++out.positives;
        out.positive_users.insert(e.user_id);
      }
      for (std::size_t k = 0; k < config.systems.size(); ++k) {
        const auto sys = config.systems[k];
        double p;
        if (auto s = system_sensor(sys)) p = slot(sensor_index(*s)).single.predict_proba(*e.feature(*s));
        else if (sys == SystemKind::EF) p = slot(kEfSlot).fused.predict_proba(e);
        else if (sys == SystemKind::LFA) p = lfa->predict_proba(e);
        else p = lfl->predict_proba(e);
        out.outcomes[k].counts.add(truth, decide(p));
      }
    }
  });

  // Deterministic reduction in (label, fold) order.
  EvaluationResult result;
  result.config = config;
  result.folds = folds.folds;
  for (std::size_t l = 0; l < n_labels; ++l) {
    LabelEvaluation le;
    le.label = config.labels[l];
    le.systems.resize(config.systems.size());
    std::set<std::string> users;
    for (std::size_t f = 0; f < n_folds; ++f) {
      const auto& out = outputs[f * n_labels + l];
      le.n_e += out.positives;
      le.n_evaluated += out.evaluated;
      users.insert(out.positive_users.begin(), out.positive_users.end());
      for (std::size_t k = 0; k < config.systems.size(); ++k) {
        le.systems[k].counts += out.outcomes[k].counts;
        le.systems[k].trivial_folds += out.outcomes[k].trivial_folds;
      }
    }
    le.n_s = users.size();
    if (le.n_evaluated > 0) {
      const auto seed = derive_seed(config.seed, {kRandomSalt, l});
      le.random_sims = simulate_random_classifier(le.n_e, le.n_evaluated, config.random_sims, seed);
      le.p99 = random_baseline_p99(le.n_e, le.n_evaluated, config.random_sims, seed);
    }
    result.labels.push_back(std::move(le));
  }
  for (std::size_t f = 0; f < n_folds; ++f)
    for (std::size_t l = 0; l < n_labels; ++l) {
      const auto task = f * n_labels + l;
      for (std::size_t s = 0; s < kSlotsPerTask; ++s) {
        const auto& slot = slots[task * kSlotsPerTask + s];
        if (!slot.used) continue;
        const auto& fit = s < kEfSlot ? slot.single.fit : slot.fused.early;
        const std::string component = s < kEfSlot ? std::string(sensor_name(kAllSensors[s])) : "ef";
        result.costs.push_back({f, config.labels[l], component, fit.selection.cost, fit.selection.fell_back,
                                fit.trivial});
      }
      const auto& out = outputs[task];
      if (out.lfl_cost) result.costs.push_back(*out.lfl_cost);
      if (out.weights) result.learned_weights.push_back(*out.weights);
    }
  return result;
}

}  // namespace ctxrec
