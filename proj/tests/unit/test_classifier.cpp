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

#include <doctest.h>

#include <cmath>
#include <random>

#include "ctxrec/classifier.hpp"
#include "ctxrec/evaluation.hpp"
#include "ctxrec/rng.hpp"

using namespace ctxrec;
using doctest::Approx;

namespace {

// The loss written out independently: 0.5 |w|^2 + C sum a_i [log(1 + e^z) - y z].
double oracle_loss(const Matrix& x, const Vector& y, const Vector& a, double c, const Vector& theta) {
  const auto d = x.cols();
  double s = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double z = x.row(i).dot(theta.head(d)) + theta[d];
    s += a[i] * (std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - y[i] * z);
  }
  return 0.5 * theta.head(d).squaredNorm() + c * s;
}

Vector oracle_weights(const Vector& y, bool balanced) {
  Vector a = Vector::Ones(y.size());
  if (!balanced) return a;
  const double pos = y.sum(), neg = double(y.size()) - pos;
  for (Eigen::Index i = 0; i < y.size(); ++i) a[i] = double(y.size()) / (2 * (y[i] > 0.5 ? pos : neg));
  return a;
}

// Plain gradient descent with backtracking; gradients by central differences
// so nothing is shared with the library's analytic gradient.
Vector oracle_minimize(const Matrix& x, const Vector& y, const Vector& a, double c) {
  const auto n = x.cols() + 1;
  Vector theta = Vector::Zero(n);
  auto f = [&](const Vector& t) { return oracle_loss(x, y, a, c, t); };
  auto grad = [&](const Vector& t) {
    Vector g(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      Vector hi = t, lo = t;
      const double h = 1e-6 * std::max(1.0, std::abs(t[j]));
      hi[j] += h;
      lo[j] -= h;
      g[j] = (f(hi) - f(lo)) / (2 * h);
    }
    return g;
  };
  double fx = f(theta);
  for (int it = 0; it < 20000; ++it) {
    const Vector g = grad(theta);
    if (g.norm() < 1e-7) break;
    double step = 1.0;
    while (step > 1e-14) {
      const Vector next = theta - step * g;
      const double fn = f(next);
      if (fn <= fx - 1e-4 * step * g.squaredNorm()) {
        theta = next;
        fx = fn;
        break;
      }
      step *= 0.5;
    }
    if (step <= 1e-14) break;
  }
  return theta;
}

Vector theta_of(const LinearModel& m) {
  Vector t(m.weights.size() + 1);
  t << m.weights, m.intercept;
  return t;
}

struct Problem {
  Matrix x;
  Vector y;
};

Problem random_problem(Rng& rng, Eigen::Index n, Eigen::Index d, double prevalence = 0.3) {
  std::normal_distribution<double> g(0, 1);
  Problem p{Matrix(n, d), Vector(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    p.y[i] = uniform01(rng) < prevalence ? 1.0 : 0.0;
    for (Eigen::Index j = 0; j < d; ++j) p.x(i, j) = g(rng) + (j == 0 ? 1.2 * p.y[i] : 0.0);
  }
  p.y[0] = 1, p.y[1] = 0;
  return p;
}

double f1_on(const Matrix& x, const Vector& y, const LinearModel& m) {
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const bool pred = x.row(i).dot(m.weights) + m.intercept > 0;
    const bool truth = y[i] > 0.5;
    tp += pred && truth, fp += pred && !truth, fn += !pred && truth;
  }
  return tp ? 2.0 * tp / (2.0 * tp + fp + fn) : 0.0;
}

}  // namespace

TEST_CASE("standardizer statistics") {
  Matrix x(3, 3);
  x << 1, 5, std::nan(""), 2, 5, std::nan(""), 3, 5, std::nan("");
  const auto s = fit_standardizer(x);
  CHECK(s.means()[0] == Approx(2.0));
  CHECK(s.stds()[0] == Approx(std::sqrt(2.0 / 3.0)));
  CHECK(s.stds()[1] == 1.0);
  CHECK(s.means()[2] == 0.0);
  CHECK(s.stds()[2] == 1.0);
  CHECK(s.empty_columns() == std::vector<std::size_t>{2});
  const Matrix t = s.transform(x);
  for (int i = 0; i < 3; ++i) {
    CHECK(t(i, 1) == 0.0);
    CHECK(t(i, 2) == 0.0);
  }
  CHECK_THROWS_AS(fit_standardizer(Matrix::Zero(1, 3)), InputError);
}

TEST_CASE("standardized training columns have mean 0 and std 1") {
  Rng rng(31);
  auto p = random_problem(rng, 200, 5);
  p.x.col(3) *= 40.0;
  p.x.col(3).array() += 7.0;
  p.x(10, 2) = std::nan("");
  const Matrix t = fit_standardizer(p.x).transform(p.x);
  for (Eigen::Index j = 0; j < 5; ++j) {
    if (j == 2) continue;
    const double m = t.col(j).mean();
    const double sd = std::sqrt((t.col(j).array() - m).square().mean());
    CHECK(std::abs(m) < 1e-9);
    CHECK(sd == Approx(1.0).epsilon(1e-9));
  }
  // Masked entry lands at the training mean.
  CHECK(t(10, 2) == 0.0);
}

TEST_CASE("balanced weights give each class equal total weight") {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_problem(rng, 50 + trial, 1, 0.1 + 0.03 * trial);
    const Vector a = sample_weights(p.y, ClassWeighting::Balanced);
    double pos = 0, neg = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) (p.y[i] > 0.5 ? pos : neg) += a[i];
    CHECK(pos == Approx(neg).epsilon(1e-12));
    CHECK(pos + neg == Approx(double(a.size())));
  }
  const Vector y = Vector::Zero(4);
  CHECK(sample_weights(y, ClassWeighting::None) == Vector::Ones(4));
}

TEST_CASE("objective agrees with the written-out loss") {
  Rng rng(33);
  std::normal_distribution<double> g(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_problem(rng, 40, 4);
    const Vector a = oracle_weights(p.y, trial % 2 == 0);
    Vector theta(5);
    for (auto& v : theta) v = g(rng);
    const double c = std::pow(10.0, -3 + 5 * uniform01(rng));
    CHECK(weighted_objective(p.x, p.y, a, c, theta) == Approx(oracle_loss(p.x, p.y, a, c, theta)).epsilon(1e-10));
  }
}

TEST_CASE("analytic gradient matches central finite differences") {
  Rng rng(34);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = 10 + Eigen::Index(uniform_index(rng, 50));
    const auto d = 1 + Eigen::Index(uniform_index(rng, 8));
    const auto p = random_problem(rng, n, d);
    const Vector a = sample_weights(p.y, ClassWeighting::Balanced);
    const double c = std::pow(10.0, -3 + 5 * uniform01(rng));
    Vector theta(d + 1);
    for (auto& v : theta) v = g(rng);
    const Vector grad = weighted_objective_gradient(p.x, p.y, a, c, theta);
    for (Eigen::Index j = 0; j <= d; ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(theta[j]));
      Vector hi = theta, lo = theta;
      hi[j] += h;
      lo[j] -= h;
      const double fd = (weighted_objective(p.x, p.y, a, c, hi) - weighted_objective(p.x, p.y, a, c, lo)) / (2 * h);
      const double scale = std::max({1.0, std::abs(fd), std::abs(grad[j])});
      CHECK(std::abs(fd - grad[j]) / scale < 1e-4);
    }
  }
}

TEST_CASE("the trained model is the minimizer found by an independent optimizer") {
  Rng rng(35);
  for (int trial = 0; trial < 8; ++trial) {
    const auto p = random_problem(rng, 60, 3);
    const double c = trial % 2 ? 0.1 : 1.0;
    for (bool balanced : {true, false}) {
      TrainOptions o;
      o.weighting = balanced ? ClassWeighting::Balanced : ClassWeighting::None;
      const auto m = train_linear(p.x, p.y, c, o);
      const Vector want = oracle_minimize(p.x, p.y, oracle_weights(p.y, balanced), c);
      const Vector got = theta_of(m);
      CHECK((got - want).norm() / std::max(1.0, want.norm()) < 1e-4);
      // Never worse than the zero model.
      const Vector a = oracle_weights(p.y, balanced);
      CHECK(oracle_loss(p.x, p.y, a, c, got) <= oracle_loss(p.x, p.y, a, c, Vector::Zero(4)));
    }
  }
}

TEST_CASE("symmetric separable data: boundary at zero, confident prediction") {
  Matrix x(2, 1);
  x << -1, 1;
  Vector y(2);
  y << 0, 1;
  const auto m = train_linear(x, y, 100.0);
  CHECK(m.weights[0] > 0);
  CHECK(std::abs(m.intercept) < 1e-6);
  CHECK(sigmoid(m.weights[0] + m.intercept) > 0.9);
}

// Balanced weights keep their per-sample value under duplication, so the
// loss term doubles: same minimizer as the original data at twice the cost.
TEST_CASE("duplicating every sample is equivalent to doubling the cost") {
  Rng rng(36);
  const auto p = random_problem(rng, 50, 3);
  Matrix x2(100, 3);
  x2 << p.x, p.x;
  Vector y2(100);
  y2 << p.y, p.y;
  const auto a = train_linear(p.x, p.y, 2.0);
  const auto b = train_linear(x2, y2, 1.0);
  CHECK((theta_of(a) - theta_of(b)).norm() < 1e-5);
  CHECK(sample_weights(y2, ClassWeighting::Balanced).head(50) == sample_weights(p.y, ClassWeighting::Balanced));
}

TEST_CASE("nine negatives and one positive: balancing rescues the positive") {
  Matrix x(10, 1);
  Vector y = Vector::Zero(10);
  for (int i = 0; i < 9; ++i) x(i, 0) = -1;
  x(9, 0) = 1;
  y[9] = 1;
  const double c = 0.1;
  const std::array<double, 1> at_pos = {1.0};

  const auto balanced = train_linear(x, y, c);
  CHECK(balanced.weights[0] > 0);
  CHECK(decide(sigmoid(balanced.decision_value(at_pos))));
  const Vector want_b = oracle_minimize(x, y, oracle_weights(y, true), c);
  CHECK(want_b[0] + want_b[1] > 0);
  CHECK((theta_of(balanced) - want_b).norm() < 1e-4);

  TrainOptions plain;
  plain.weighting = ClassWeighting::None;
  const auto control = train_linear(x, y, c, plain);
  CHECK_FALSE(decide(sigmoid(control.decision_value(at_pos))));
  const Vector want_u = oracle_minimize(x, y, oracle_weights(y, false), c);
  CHECK(want_u[0] + want_u[1] < 0);
  CHECK((theta_of(control) - want_u).norm() < 1e-4);
}

TEST_CASE("single-class or bad-cost training is rejected") {
  Matrix x = Matrix::Ones(3, 1);
  Vector y = Vector::Zero(3);
  CHECK_THROWS_AS(train_linear(x, y, 1.0), DegenerateError);
  y << 0, 1, 0;
  CHECK_THROWS_AS(train_linear(x, y, 0.0), ConfigError);
  CHECK_THROWS_AS(train_linear(x, Vector::Zero(2), 1.0), InputError);
}

TEST_CASE("probability arithmetic") {
  LinearModel m;
  m.weights = Vector::Zero(2);
  const std::array<double, 2> x = {3.0, -4.0};
  CHECK(sigmoid(m.decision_value(x)) == 0.5);
  CHECK_FALSE(decide(0.5));
  CHECK(sigmoid(std::log(3.0)) == Approx(0.75));
  double last = 0;
  for (double z = -700; z <= 700; z += 7) {
    const double p = sigmoid(z);
    CHECK(p >= last);
    if (std::abs(z) < 30) {
      CHECK(p > 0.0);
      CHECK(p < 1.0);
      CHECK(p > last);
    }
    last = p;
  }
  const std::array<double, 1> wrong = {1.0};
  CHECK_THROWS_AS(m.decision_value(wrong), InputError);
}

TEST_CASE("cost grid is the six decades") {
  CHECK(kCostGrid == std::array<double, 6>{0.001, 0.01, 0.1, 1, 10, 100});
}

TEST_CASE("cost selection ties go to the smallest cost") {
  // Widely separated classes: every cost classifies the validation set perfectly.
  Matrix x(30, 1);
  Vector y(30);
  for (int i = 0; i < 30; ++i) {
    y[i] = i % 3 == 0;
    x(i, 0) = y[i] > 0.5 ? 5.0 + 0.01 * i : -5.0 - 0.01 * i;
  }
  const auto sel = select_cost(fit_standardizer(x).transform(x), y, 7);
  CHECK_FALSE(sel.fell_back);
  for (double f : sel.validation_f1) CHECK(f == 1.0);
  CHECK(sel.cost == 0.001);
}

TEST_CASE("cost selection avoids an underfitting cost") {
  // x0 = class signal + large shared nuisance, x1 = the nuisance alone. Only
  // a weakly regularized model learns to subtract it.
  Rng rng(5);
  std::normal_distribution<double> g(0, 1);
  const int n = 300;
  Matrix x(n, 2);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    const bool pos = uniform01(rng) < 0.3;
    const double nuisance = 5 * g(rng);
    y[i] = pos;
    x(i, 0) = (pos ? 0.5 : -0.5) + 0.1 * g(rng) + nuisance;
    x(i, 1) = nuisance;
  }
  const Matrix xs = fit_standardizer(x).transform(x);
  // Oracle precondition on the full set.
  const Vector a = oracle_weights(y, true);
  LinearModel small, large;
  const Vector ts = oracle_minimize(xs, y, a, 0.001), tl = oracle_minimize(xs, y, a, 10.0);
  small.weights = ts.head(2), small.intercept = ts[2];
  large.weights = tl.head(2), large.intercept = tl[2];
  REQUIRE(f1_on(xs, y, large) - f1_on(xs, y, small) > 0.1);

  const auto sel = select_cost(xs, y, 1);
  CHECK(sel.cost != 0.001);
  CHECK(sel.cost >= 1.0);
  // Deterministic for a fixed seed.
  CHECK(select_cost(xs, y, 1).cost == sel.cost);
}

TEST_CASE("too few positives to stratify falls back to C = 1") {
  Matrix x(10, 1);
  Vector y = Vector::Zero(10);
  for (int i = 0; i < 10; ++i) x(i, 0) = i;
  y[8] = y[9] = 1;
  const auto sel = select_cost(x, y, 0);
  CHECK(sel.fell_back);
  CHECK(sel.cost == 1.0);
}

TEST_CASE("pipeline: single-class data gives a trivial constant model") {
  Matrix x = Matrix::Random(5, 3);
  PipelineOptions o;
  const auto neg = fit_linear_pipeline(x, Vector::Zero(5), o);
  CHECK(neg.trivial);
  const std::array<double, 3> probe = {0.1, 0.2, 0.3};
  CHECK(neg.predict_proba(probe) == 0.5);
  CHECK_FALSE(decide(neg.predict_proba(probe)));
  const auto pos = fit_linear_pipeline(x, Vector::Ones(5), o);
  CHECK(pos.predict_proba(probe) == Approx(0.75));
  const auto empty = fit_linear_pipeline(Matrix(0, 3), Vector(0), o);
  CHECK(empty.trivial);
}

TEST_CASE("pipeline: fixed cost skips the grid and masked inputs map to the mean") {
  Rng rng(37);
  const auto p = random_problem(rng, 80, 2);
  PipelineOptions o;
  o.grid_search = false;
  o.fixed_cost = 1.0;
  const auto fit = fit_linear_pipeline(p.x, p.y, o);
  CHECK(fit.model.cost == 1.0);
  CHECK_FALSE(fit.trivial);
  const std::array<double, 2> missing = {std::nan(""), std::nan("")};
  CHECK(fit.predict_proba(missing) == Approx(sigmoid(fit.model.intercept)));
  const std::array<double, 3> wrong = {0, 0, 0};
  CHECK_THROWS_AS(fit.predict_proba(wrong), InputError);

  o.grid_search = true;
  o.seed = 9;
  const auto a = fit_linear_pipeline(p.x, p.y, o);
  const auto b = fit_linear_pipeline(p.x, p.y, o);
  CHECK(a.selection.cost == b.selection.cost);
  CHECK(a.model.weights == b.model.weights);
}
