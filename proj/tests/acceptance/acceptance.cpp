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

// End-to-end checks, one line per criterion. Exit status is nonzero when any
// criterion fails; skipped criteria do not count as failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ctxrec/classifier.hpp"
#include "ctxrec/evaluation.hpp"
#include "ctxrec/experiment.hpp"
#include "ctxrec/features.hpp"
#include "ctxrec/fusion.hpp"
#include "ctxrec/ingestion.hpp"
#include "ctxrec/personalization.hpp"
#include "synthetic.hpp"

using namespace ctxrec;
namespace fs = std::filesystem;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
  Outcome outcome = Outcome::Pass;
  std::string detail;
};

// Collects failed expectations; the first few are reported.
class Expect {
 public:
  void operator()(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_++ < 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  Verdict verdict(std::string detail) const {
    if (failures_ == 0) return {Outcome::Pass, std::move(detail)};
    return {Outcome::Fail, std::to_string(failures_) + " failed: " + messages_};
  }

 private:
  std::size_t failures_ = 0;
  std::string messages_;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// ---- 1 ------------------------------------------------------------------

Verdict dimensions() {
  Expect expect;
  Rng rng(1001);
  std::vector<Example> xs;
  for (int trial = 0; trial < 1000; ++trial) {
    Example e;
    e.user_id = "u";
    const double secs = 0.5 + 30 * uniform01(rng);
    e.sensor_data.acc = testing::random_triaxial(rng, Unit::G, 40, secs);
    e.sensor_data.gyro = testing::random_triaxial(rng, Unit::RadPerSec, 40, secs);
    e.sensor_data.watch_acc = testing::random_triaxial(rng, Unit::MilliG, 25, secs);
    e.sensor_data.location = testing::random_location(rng, 1 + uniform_index(rng, 20));
    e.sensor_data.audio = testing::random_mfcc(rng, 1 + uniform_index(rng, 40));
    e.sensor_data.phone_state = testing::random_phone_state(rng);
    extract_all_features(e);
    for (auto s : kAllSensors) {
      const auto* f = e.feature(s);
      expect(f && f->size() == sensor_dim(s),
             std::string(sensor_name(s)) + " width " + (f ? std::to_string(f->size()) : "none"));
    }
    xs.push_back(std::move(e));
  }
  const auto m = concatenated_matrix(xs, all_rows(xs.size()), kAllSensors);
  expect(m.cols() == 175, "EF width " + std::to_string(m.cols()));
  const std::size_t widths[] = {26, 26, 46, 17, 26, 34};
  for (auto s : kAllSensors) expect(sensor_dim(s) == widths[sensor_index(s)], "declared width");
  return expect.verdict("1000 random sessions: 26/26/46/17/26/34, EF 175");
}

// ---- 2 ------------------------------------------------------------------

Verdict metric_oracle() {
  Expect expect;
  Rng rng(1002);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = 1 + uniform_index(rng, 500);
    const double prevalence = uniform01(rng), yes = uniform01(rng);
    MetricCounts c;
    double tp = 0, tn = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool t = uniform01(rng) < prevalence, p = uniform01(rng) < yes;
      c.add(t, p);
      if (t && p) tp += 1;
      if (!t && !p) tn += 1;
      if (!t && p) fp += 1;
      if (t && !p) fn += 1;
    }
    expect(double(c.tp) == tp && double(c.tn) == tn && double(c.fp) == fp && double(c.fn) == fn, "tally");
    const auto r = compute_metrics(c);
    expect(*r.accuracy == (tp + tn) / double(n), "accuracy");
    const bool pos = tp + fn > 0, neg = tn + fp > 0, said = tp + fp > 0;
    expect(r.tpr.has_value() == pos && (!pos || *r.tpr == tp / (tp + fn)), "tpr");
    expect(r.tnr.has_value() == neg && (!neg || *r.tnr == tn / (tn + fp)), "tnr");
    expect(r.precision.has_value() == said && (!said || *r.precision == tp / (tp + fp)), "precision");
    if (pos && neg) expect(*r.balanced_accuracy == (tp / (tp + fn) + tn / (tn + fp)) / 2, "ba");
    if (pos && said) {
      const double s = tp / (tp + fn), p = tp / (tp + fp);
      expect(r.f1 == (s + p > 0 ? 2 * s * p / (s + p) : 0.0), "f1");
    }
  }
  const auto w = compute_metrics({3, 4, 2, 1});
  expect(std::abs(*w.balanced_accuracy - 0.7083333333333333) < 1e-12, "worked BA " + fmt(*w.balanced_accuracy, 15));
  expect(std::abs(w.f1 - 0.6666666666666666) < 1e-12, "worked F1 " + fmt(w.f1, 15));
  return expect.verdict("1000 random vectors exact; worked example BA " + fmt(*w.balanced_accuracy) + ", F1 " +
                        fmt(w.f1));
}

// ---- 3 ------------------------------------------------------------------

Verdict gradient_check() {
  Expect expect;
  Rng rng(1003);
  std::normal_distribution<double> g(0, 1);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = 5 + Eigen::Index(uniform_index(rng, 80));
    const auto d = 1 + Eigen::Index(uniform_index(rng, 12));
    Matrix x(n, d);
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = i < 2 ? double(i) : double(uniform01(rng) < 0.3);
      for (Eigen::Index j = 0; j < d; ++j) x(i, j) = g(rng) + (j == 0 ? y[i] : 0.0);
    }
    const Vector a = sample_weights(y, ClassWeighting::Balanced);
    const double cost = std::pow(10.0, -3 + 5 * uniform01(rng));
    Vector theta(d + 1);
    for (auto& v : theta) v = g(rng);
    const Vector grad = weighted_objective_gradient(x, y, a, cost, theta);
    for (Eigen::Index j = 0; j <= d; ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(theta[j]));
      Vector hi = theta, lo = theta;
      hi[j] += h;
      lo[j] -= h;
      const double fd = (weighted_objective(x, y, a, cost, hi) - weighted_objective(x, y, a, cost, lo)) / (2 * h);
      const double rel = std::abs(fd - grad[j]) / std::max({1.0, std::abs(fd), std::abs(grad[j])});
      worst = std::max(worst, rel);
    }
  }
  expect(worst < 1e-4, "relative error " + std::to_string(worst));
  return expect.verdict("100 instances, worst relative error " + std::to_string(worst));
}

// ---- 4 ------------------------------------------------------------------

// Gradient descent on the loss written out directly, with finite-difference
// gradients; nothing shared with the library's solver.
Vector reference_minimizer(const Matrix& x, const Vector& y, bool balanced, double cost) {
  const auto d = x.cols();
  const double pos = y.sum(), neg = double(y.size()) - pos;
  auto f = [&](const Vector& t) {
    double s = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double a = balanced ? double(y.size()) / (2 * (y[i] > 0.5 ? pos : neg)) : 1.0;
      const double z = x.row(i).dot(t.head(d)) + t[d];
      s += a * (std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - y[i] * z);
    }
    return 0.5 * t.head(d).squaredNorm() + cost * s;
  };
  Vector t = Vector::Zero(d + 1);
  double ft = f(t);
  for (int it = 0; it < 50000; ++it) {
    Vector grad(d + 1);
    for (Eigen::Index j = 0; j <= d; ++j) {
      Vector hi = t, lo = t;
      hi[j] += 1e-6;
      lo[j] -= 1e-6;
      grad[j] = (f(hi) - f(lo)) / 2e-6;
    }
    if (grad.norm() < 1e-8) break;
    double step = 1;
    for (; step > 1e-14; step *= 0.5) {
      const Vector next = t - step * grad;
      const double fn = f(next);
      if (fn <= ft - 1e-4 * step * grad.squaredNorm()) {
        t = next;
        ft = fn;
        break;
      }
    }
    if (step <= 1e-14) break;
  }
  return t;
}

Verdict balanced_weights() {
  Expect expect;
  Matrix x(10, 1);
  Vector y = Vector::Zero(10);
  for (int i = 0; i < 9; ++i) x(i, 0) = -1;
  x(9, 0) = 1;
  y[9] = 1;
  const double cost = 0.1;
  const std::array<double, 1> lone = {1.0};

  const auto balanced = train_linear(x, y, cost);
  TrainOptions plain;
  plain.weighting = ClassWeighting::None;
  const auto control = train_linear(x, y, cost, plain);
  const double pb = sigmoid(balanced.decision_value(lone)), pc = sigmoid(control.decision_value(lone));
  expect(decide(pb), "balanced model misses the positive (p=" + fmt(pb) + ")");
  expect(!decide(pc), "unweighted control catches the positive (p=" + fmt(pc) + ")");

  const Vector rb = reference_minimizer(x, y, true, cost), rc = reference_minimizer(x, y, false, cost);
  Vector tb(2), tc(2);
  tb << balanced.weights[0], balanced.intercept;
  tc << control.weights[0], control.intercept;
  expect((tb - rb).norm() < 1e-4, "balanced solution differs from reference");
  expect((tc - rc).norm() < 1e-4, "control solution differs from reference");
  expect(rb[0] + rb[1] > 0 && rc[0] + rc[1] < 0, "reference decisions");
  return expect.verdict("C=0.1: balanced p=" + fmt(pb) + ", unweighted p=" + fmt(pc) +
                        "; both match the reference optimizer");
}

// ---- 5 ------------------------------------------------------------------

Verdict random_baseline() {
  Expect expect;
  const double big = *random_baseline_p99(54359, 176941).balanced_accuracy;
  const double small = *random_baseline_p99(122, 176941).balanced_accuracy;
  expect(std::abs(big - 0.50) <= 0.005, "n_e=54359 p99 " + fmt(big));
  expect(std::abs(small - 0.55) <= 0.02, "n_e=122 p99 " + fmt(small));
  return expect.verdict("p99 BA " + fmt(big) + " (n_e=54359), " + fmt(small) + " (n_e=122)");
}

// ---- 6 ------------------------------------------------------------------

Verdict fusion_sanity() {
  Expect expect;
  const auto d = testing::complementary_dataset(5000, 1006);
  FoldPartition p;
  p.folds.resize(5);
  const auto users = d.users();
  for (std::size_t i = 0; i < users.size(); ++i) p.folds[i % 5].push_back(users[i]);
  EvaluationConfig c;
  c.labels = {"TARGET"};
  c.systems.assign(std::begin(kAllSystems), std::end(kAllSystems));
  c.seed = 6;
  c.jobs = 4;
  const auto r = evaluate_systems(d, &p, c);
  double best_single = 0;
  std::string text;
  for (std::size_t k = 0; k < 9; ++k) {
    const double ba = r.report(0, k).balanced_accuracy.value_or(0);
    if (k < 6) best_single = std::max(best_single, ba);
    text += std::string(k ? " " : "") + std::string(system_name(c.systems[k])) + "=" + fmt(ba, 3);
  }
  for (std::size_t k = 6; k < 9; ++k) {
    const double ba = r.report(0, k).balanced_accuracy.value_or(0);
    expect(ba >= best_single - 0.02, std::string(system_name(c.systems[k])) + " BA " + fmt(ba) + " < best single " +
                                         fmt(best_single) + " - 0.02");
  }
  // Weights averaged over folds, and every fold on its own.
  std::vector<double> mean(6, 0.0);
  for (const auto& w : r.learned_weights) {
    std::vector<std::size_t> order(6);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return w.weights[a] > w.weights[b]; });
    const std::set<std::size_t> top = {order[0], order[1]};
    expect(top == std::set<std::size_t>{sensor_index(Sensor::Acc), sensor_index(Sensor::Loc)},
           "fold " + std::to_string(w.fold) + " top weights are not acc and loc");
    for (std::size_t j = 0; j < 6; ++j) mean[j] += w.weights[j] / double(r.learned_weights.size());
  }
  expect(r.learned_weights.size() == 5, "expected five folds of weights");
  std::string weights;
  for (std::size_t j = 0; j < 6; ++j)
    weights += std::string(j ? " " : "") + std::string(sensor_name(kAllSensors[j])) + "=" + fmt(mean[j], 2);
  return expect.verdict("BA " + text + "; mean LFL weights " + weights);
}

// ---- 7 ------------------------------------------------------------------

Verdict time_bins() {
  Expect expect;
  for (int h = 0; h < 24; ++h) {
    const auto bins = time_of_day_bins(h);
    const auto on = std::count(bins.begin(), bins.end(), true);
    expect(on == 2, "hour " + std::to_string(h) + " activates " + std::to_string(on));
    // Bin b covers hours [3b, 3b + 6) modulo 24.
    for (int b = 0; b < 8; ++b) {
      bool inside = false;
      for (int k = 0; k < 6; ++k) inside |= (3 * b + k) % 24 == h;
      expect(bins[b] == inside, "hour " + std::to_string(h) + " bin " + std::to_string(b));
    }
  }
  return expect.verdict("24 hours, 2 of 8 bins each");
}

// ---- 8 ------------------------------------------------------------------

Verdict invariants() {
  Expect expect;
  Rng rng(1008);
  std::normal_distribution<double> g(0, 1);
  const double cap = std::log(20.0);
  double max_h = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> x(2 + uniform_index(rng, 400));
    const int kind = trial % 4;
    for (auto& v : x)
      v = kind == 0 ? g(rng) : kind == 1 ? std::exp(3 * g(rng)) : kind == 2 ? double(uniform_index(rng, 3)) : 5.0;
    const double h = value_entropy(x);
    expect(h >= 0 && h <= cap + 1e-12, "value entropy " + std::to_string(h));
    max_h = std::max(max_h, h);
  }
  const std::size_t groups[] = {4, 4, 7, 3, 4, 4};
  for (int trial = 0; trial < 2000; ++trial) {
    const auto f = extract_phone_state_features(testing::random_phone_state(rng));
    std::size_t at = 0;
    for (auto n : groups) {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) s += f[at + i];
      expect(s == 1.0, "one-hot group sums to " + std::to_string(s));
      at += n;
    }
  }
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> p(1 + uniform_index(rng, 6));
    for (auto& v : p) v = uniform01(rng);
    const double avg = late_fusion_average(p).probability;
    expect(avg >= *std::min_element(p.begin(), p.end()) && avg <= *std::max_element(p.begin(), p.end()),
           "late average outside its inputs");
  }
  return expect.verdict("value entropy max " + fmt(max_h) + " <= ln 20; one-hot sums 1; late average bounded");
}

// ---- 9 ------------------------------------------------------------------

Verdict personalization() {
  Expect expect;
  const auto base = testing::synthetic_dataset({.users = 6, .per_user = 60, .seed = 1009, .missing_watch = 0.0});
  // NEW_HABIT: user00 only starts it in the last quarter of their timeline.
  std::vector<Example> xs(base.examples().begin(), base.examples().end());
  const auto idx = base.user_examples("user00");
  const auto cut = base.examples()[idx[idx.size() * 3 / 4]].timestamp;
  for (auto& e : xs) {
    const bool pos = e.user_id == "user00" ? e.timestamp >= cut : e.label("SITTING") == LabelValue::Relevant;
    e.set_label("NEW_HABIT", pos ? LabelValue::Relevant : LabelValue::NotRelevant);
  }
  auto vocab = base.label_vocabulary();
  vocab.push_back("NEW_HABIT");
  const Dataset d(std::move(xs), vocab);
  FoldPartition p;
  p.folds = {{"user00", "user03"}, {"user01", "user04"}, {"user02", "user05"}};

  PersonalizationConfig c;
  c.labels = {"SITTING", "AT_HOME", "NEW_HABIT"};
  c.seed = 9;
  const auto r = run_personalization(d, &p, "user00", c);
  const auto& habit = r.labels[2];
  expect(habit.adaptation_positives == 0 && habit.individual_trivial, "NEW_HABIT should have no adaptation positives");
  const auto ir = habit.individual_report();
  expect(ir.balanced_accuracy == 0.5 && ir.f1 == 0.0, "trivial individual model not reported as BA 0.5 / F1 0");

  std::size_t checked = 0;
  const std::set<std::size_t> universal(r.universal_training.begin(), r.universal_training.end());
  const std::set<std::size_t> adaptation(r.split.adaptation.begin(), r.split.adaptation.end());
  for (auto i : r.universal_training) expect(d.examples()[i].user_id != "user00", "user00 in universal training");
  for (const auto& l : r.labels) {
    for (auto i : l.individual_training) expect(adaptation.count(i) == 1, "individual training outside adaptation");
    for (const auto& pr : l.predictions) {
      ++checked;
      const double want = l.individual_trivial ? pr.universal : (pr.universal + pr.individual) / 2;
      expect(std::abs(pr.adapted - want) <= 1e-15, "adapted is not the mean of its inputs");
      expect(universal.count(pr.example) == 0 && adaptation.count(pr.example) == 0, "deployment example reused");
    }
  }
  return expect.verdict(std::to_string(checked) + " deployment predictions checked; zero-positive label at BA 0.5 / F1 0");
}

// ---- 10 -----------------------------------------------------------------

Verdict dataset_reproduction() {
  const char* root_env = std::getenv("CTXREC_DATASET_DIR");
  if (!root_env || !*root_env) return {Outcome::Skip, "set CTXREC_DATASET_DIR to the extracted public dataset"};
  const fs::path root = root_env;
  const fs::path features = fs::is_directory(root / "features") ? root / "features" : root;
  const char* part_env = std::getenv("CTXREC_PARTITION_DIR");
  const fs::path partition_path = part_env && *part_env ? fs::path(part_env) : root / "cv_5_folds";

  const char* display[] = {"Lying down", "Sitting", "Walking", "Running", "Bicycling", "Sleeping", "Lab work",
                           "In class", "In a meeting", "At main workplace", "Indoors", "Outside", "In a car",
                           "On a bus", "Drive (I'm the driver)", "Drive (I'm a passenger)", "At home",
                           "At a restaurant", "Phone in pocket", "Exercise", "Cooking", "Shopping", "Strolling",
                           "Drinking (alcohol)", "Bathing - shower"};
  EvaluationConfig c;
  for (auto name : display) c.labels.push_back(canonical_label_name(name));
  c.systems.assign(std::begin(kAllSystems), std::end(kAllSystems));
  c.jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto loaded = load_features_dir(features);
  const auto partition = load_fold_partition(partition_path);
  const auto r = evaluate_systems(loaded.dataset, &partition, c);

  Expect expect;
  const std::pair<SystemKind, double> targets[] = {{SystemKind::LFL, 0.80}, {SystemKind::LFA, 0.80},
                                                   {SystemKind::EF, 0.77}};
  std::string text;
  for (auto [system, want] : targets) {
    const auto k = static_cast<std::size_t>(std::find(c.systems.begin(), c.systems.end(), system) - c.systems.begin());
    const double got = r.average(k, Metric::BalancedAccuracy, true).value_or(0);
    expect(std::abs(got - want) <= 0.03, std::string(system_name(system)) + " average BA " + fmt(got, 3));
    text += std::string(system_name(system)) + "=" + fmt(got, 3) + " ";
  }
  const auto lfl = static_cast<std::size_t>(
      std::find(c.systems.begin(), c.systems.end(), SystemKind::LFL) - c.systems.begin());
  const double lying = r.report(0, lfl).balanced_accuracy.value_or(0);
  expect(std::abs(lying - 0.88) <= 0.03, "lying down LFL BA " + fmt(lying, 3));
  return expect.verdict("average BA " + text + "; lying down LFL " + fmt(lying, 3));
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {1, "dimension contract", dimensions},
      {2, "metric oracle", metric_oracle},
      {3, "gradient check", gradient_check},
      {4, "balanced weights", balanced_weights},
      {5, "random baseline", random_baseline},
      {6, "fusion on complementary sensors", fusion_sanity},
      {7, "time bins", time_bins},
      {8, "entropy and normalization invariants", invariants},
      {9, "personalization protocol", personalization},
      {10, "dataset reproduction", dataset_reproduction},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Fail ? "FAIL" : "SKIP";
    std::printf("criterion %2d %s: %s (%s) [%.1fs]\n", c.id, tag, c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
    if (v.outcome == Outcome::Fail) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
