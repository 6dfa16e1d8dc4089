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

#include "ctxrec/evaluation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "ctxrec/rng.hpp"

namespace ctxrec {

MetricReport compute_metrics(const MetricCounts& c) {
  MetricReport r;
  const auto d = [](std::uint64_t v) { return static_cast<double>(v); };
  if (c.total() > 0) r.accuracy = d(c.tp + c.tn) / d(c.total());
  if (c.tp + c.fn > 0) r.tpr = d(c.tp) / d(c.tp + c.fn);
  if (c.tn + c.fp > 0) r.tnr = d(c.tn) / d(c.tn + c.fp);
  if (c.tp + c.fp > 0) r.precision = d(c.tp) / d(c.tp + c.fp);
  if (r.tpr && r.tnr) r.balanced_accuracy = (*r.tpr + *r.tnr) / 2.0;
  if (r.tpr && r.precision) {
    r.f1_defined = true;
    const double denom = *r.tpr + *r.precision;
    r.f1 = denom > 0 ? (2.0 * *r.tpr * *r.precision) / denom : 0.0;
  }
  return r;
}

namespace {
constexpr std::pair<Metric, std::string_view> kMetricNames[] = {
    {Metric::Accuracy, "accuracy"}, {Metric::Tpr, "tpr"},
    {Metric::Tnr, "tnr"},           {Metric::Precision, "precision"},
    {Metric::BalancedAccuracy, "ba"}, {Metric::F1, "f1"},
};
}  // namespace

std::optional<Metric> parse_metric(std::string_view name) {
  for (auto [m, n] : kMetricNames)
    if (n == name) return m;
  return std::nullopt;
}

std::string_view metric_name(Metric m) {
  for (auto [k, n] : kMetricNames)
    if (k == m) return n;
  return "?";
}

std::optional<double> metric_value(const MetricReport& r, Metric m) {
  switch (m) {
    case Metric::Accuracy: return r.accuracy;
    case Metric::Tpr: return r.tpr;
    case Metric::Tnr: return r.tnr;
    case Metric::Precision: return r.precision;
    case Metric::BalancedAccuracy: return r.balanced_accuracy;
    case Metric::F1: return r.f1;
  }
  return std::nullopt;
}

int FoldPartition::fold_of(std::string_view user) const {
  for (std::size_t f = 0; f < folds.size(); ++f)
    if (std::find(folds[f].begin(), folds[f].end(), user) != folds[f].end()) return static_cast<int>(f);
  return -1;
}

std::vector<std::string> FoldPartition::all_users() const {
  std::vector<std::string> out;
  for (const auto& f : folds) out.insert(out.end(), f.begin(), f.end());
  return out;
}

void validate_partition(const FoldPartition& partition) {
  if (partition.folds.empty()) throw InputError("partition has no folds");
  std::map<std::string, std::size_t> seen;
  for (std::size_t f = 0; f < partition.folds.size(); ++f) {
    if (partition.folds[f].empty()) throw InputError("fold " + std::to_string(f) + " is empty");
    for (const auto& u : partition.folds[f]) {
      auto [it, fresh] = seen.emplace(u, f);
      if (!fresh)
        throw InputError("user " + u + " appears in folds " + std::to_string(it->second) + " and " +
                         std::to_string(f));
    }
  }
}

FoldPartition partition_folds(std::span<const UserPlatform> users, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw ConfigError("fold count must be positive");
  if (users.size() < k)
    throw ConfigError("cannot partition " + std::to_string(users.size()) + " users into " +
                      std::to_string(k) + " folds");
  std::vector<std::string> iphone, android;
  for (const auto& u : users) (u.platform == Platform::IPhone ? iphone : android).push_back(u.user_id);
  // Input order must not matter.
  std::sort(iphone.begin(), iphone.end());
  std::sort(android.begin(), android.end());
  Rng rng(derive_seed(seed, {0x70617274}));
  shuffle(std::span(iphone), rng);
  shuffle(std::span(android), rng);

  FoldPartition p;
  p.seed = seed;
  p.folds.resize(k);
  std::size_t next = 0;
  for (const auto& group : {iphone, android})
    for (const auto& u : group) {
      p.folds[next].push_back(u);
      next = (next + 1) % k;
    }
  validate_partition(p);
  return p;
}

double percentile_of(std::vector<double> values, double q) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

// Number of heads among n fair coin flips, one bit per flip.
std::uint64_t count_heads(Rng& rng, std::uint64_t n) {
  std::uint64_t heads = 0;
  for (; n >= 64; n -= 64) heads += static_cast<std::uint64_t>(std::popcount(rng()));
  if (n > 0) heads += static_cast<std::uint64_t>(std::popcount(rng() >> (64 - n)));
  return heads;
}

}  // namespace

std::vector<MetricReport> simulate_random_classifier(std::uint64_t n_positive, std::uint64_t n_total,
                                                     std::size_t n_sims, std::uint64_t seed) {
  if (n_positive > n_total) throw ConfigError("more positives than examples");
  std::vector<MetricReport> out;
  out.reserve(n_sims);
  for (std::size_t s = 0; s < n_sims; ++s) {
    Rng rng(derive_seed(seed, {s}));
    MetricCounts c;
    c.tp = count_heads(rng, n_positive);
    c.fn = n_positive - c.tp;
    c.fp = count_heads(rng, n_total - n_positive);
    c.tn = n_total - n_positive - c.fp;
    out.push_back(compute_metrics(c));
  }
  return out;
}

std::optional<double> RandomBaseline::get(Metric m) const {
  switch (m) {
    case Metric::Accuracy: return accuracy;
    case Metric::Tpr: return tpr;
    case Metric::Tnr: return tnr;
    case Metric::Precision: return precision;
    case Metric::BalancedAccuracy: return balanced_accuracy;
    case Metric::F1: return f1;
  }
  return std::nullopt;
}

RandomBaseline random_baseline_p99(std::uint64_t n_positive, std::uint64_t n_total, std::size_t n_sims,
                                   std::uint64_t seed) {
  if (n_total == 0) throw ConfigError("random baseline needs at least one example");
  const auto sims = simulate_random_classifier(n_positive, n_total, n_sims, seed);
  auto p99 = [&](Metric m) -> std::optional<double> {
    std::vector<double> v;
    for (const auto& r : sims)
      if (auto x = metric_value(r, m)) v.push_back(*x);
    if (v.empty()) return std::nullopt;
    return percentile_of(std::move(v), kRandomPercentile);
  };
  return {p99(Metric::Accuracy), p99(Metric::Tpr),
          p99(Metric::Tnr),      p99(Metric::Precision),
          p99(Metric::BalancedAccuracy), p99(Metric::F1)};
}

ConfusionMatrix confusion_matrix(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                                 std::vector<std::string> classes) {
  if (truth.size() != predicted.size()) throw InputError("truth and prediction lengths differ");
  const auto k = classes.size();
  ConfusionMatrix m;
  m.classes = std::move(classes);
  m.counts.assign(k, std::vector<std::uint64_t>(k, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= k || predicted[i] >= k) throw InputError("class index out of range");
    ++m.counts[truth[i]][predicted[i]];
  }
  m.rows.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::uint64_t total = 0;
    for (auto c : m.counts[i]) total += c;
    if (total == 0) continue;
    std::vector<double> row(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = static_cast<double>(m.counts[i][j]) / static_cast<double>(total);
    m.rows[i] = std::move(row);
  }
  return m;
}

}  // namespace ctxrec
