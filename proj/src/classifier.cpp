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

#include "ctxrec/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctxrec/evaluation.hpp"
#include "ctxrec/rng.hpp"

namespace ctxrec {

Standardizer::Standardizer(std::vector<double> means, std::vector<double> stds)
    : means_(std::move(means)), stds_(std::move(stds)) {
  if (means_.size() != stds_.size()) throw InputError("standardizer means/stds length mismatch");
  for (auto& s : stds_)
    if (!(s > 0) || !std::isfinite(s)) s = 1.0;
}

Standardizer fit_standardizer(const Matrix& raw) {
  if (raw.rows() < 2) throw InputError("standardizer needs at least 2 rows");
  const auto d = static_cast<std::size_t>(raw.cols());
  Standardizer s;
  s.means_.assign(d, 0.0);
  s.stds_.assign(d, 1.0);
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    double sum = 0.0;
    std::size_t n = 0;
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
      const double v = raw(i, j);
      if (std::isnan(v)) continue;
      sum += v;
      ++n;
    }
    if (n == 0) {
      s.empty_columns_.push_back(static_cast<std::size_t>(j));
      continue;
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
      const double v = raw(i, j);
      if (!std::isnan(v)) ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    s.means_[j] = mean;
    s.stds_[j] = sd > 0 ? sd : 1.0;
  }
  return s;
}

Matrix Standardizer::transform(const Matrix& raw) const {
  if (static_cast<std::size_t>(raw.cols()) != dim())
    throw InputError("standardizer dimension mismatch");
  Matrix out(raw.rows(), raw.cols());
  for (Eigen::Index j = 0; j < raw.cols(); ++j)
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
      const double v = raw(i, j);
      out(i, j) = std::isnan(v) ? 0.0 : (v - means_[j]) / stds_[j];
    }
  return out;
}

void Standardizer::transform_row(std::span<const double> raw, std::span<double> out) const {
  if (raw.size() != dim() || out.size() != dim()) throw InputError("standardizer dimension mismatch");
  for (std::size_t j = 0; j < raw.size(); ++j)
    out[j] = std::isnan(raw[j]) ? 0.0 : (raw[j] - means_[j]) / stds_[j];
}

double LinearModel::decision_value(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(weights.size())) throw InputError("model dimension mismatch");
  double z = intercept;
  for (std::size_t j = 0; j < x.size(); ++j) z += weights[static_cast<Eigen::Index>(j)] * x[j];
  return z;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// log(1 + e^z)
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

struct ClassCounts {
  std::size_t pos = 0, neg = 0;
};

ClassCounts count_classes(const Vector& y) {
  ClassCounts c;
  for (Eigen::Index i = 0; i < y.size(); ++i) (y[i] > 0.5 ? c.pos : c.neg)++;
  return c;
}

Vector margins(const Matrix& x, const Vector& theta) {
  const auto d = x.cols();
  return (x * theta.head(d)).array() + theta[d];
}

}  // namespace

Vector sample_weights(const Vector& y, ClassWeighting weighting) {
  Vector a = Vector::Ones(y.size());
  if (weighting == ClassWeighting::None) return a;
  const auto c = count_classes(y);
  const double n = static_cast<double>(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const auto nc = y[i] > 0.5 ? c.pos : c.neg;
    a[i] = n / (2.0 * static_cast<double>(nc));
  }
  return a;
}

double weighted_objective(const Matrix& x, const Vector& y, const Vector& alpha, double cost,
                          const Vector& theta) {
  const auto d = x.cols();
  const Vector z = margins(x, theta);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) loss += alpha[i] * (softplus(z[i]) - y[i] * z[i]);
  return 0.5 * theta.head(d).squaredNorm() + cost * loss;
}

Vector weighted_objective_gradient(const Matrix& x, const Vector& y, const Vector& alpha,
                                   double cost, const Vector& theta) {
  const auto d = x.cols();
  const Vector z = margins(x, theta);
  Vector r(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) r[i] = alpha[i] * (sigmoid(z[i]) - y[i]);
  Vector g(d + 1);
  g.head(d) = theta.head(d) + cost * (x.transpose() * r);
  g[d] = cost * r.sum();
  return g;
}

LinearModel train_linear(const Matrix& x, const Vector& y, double cost, const TrainOptions& options) {
  if (!(cost > 0)) throw ConfigError("cost must be positive");
  if (x.rows() != y.size()) throw InputError("feature/label row count mismatch");
  const auto counts = count_classes(y);
  if (counts.pos == 0 || counts.neg == 0) throw DegenerateError("degenerate label");

  const auto d = x.cols();
  const Vector alpha = sample_weights(y, options.weighting);
  Vector theta = Vector::Zero(d + 1);
  Vector g = weighted_objective_gradient(x, y, alpha, cost, theta);
  double f = weighted_objective(x, y, alpha, cost, theta);
  const double stop = options.gradient_tolerance * std::max(1.0, g.norm());

  for (int iter = 0; iter < options.max_iterations && g.norm() > stop; ++iter) {
    // Curvature weights alpha_i p_i (1 - p_i).
    const Vector z = margins(x, theta);
    Vector curv(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double p = sigmoid(z[i]);
      curv[i] = alpha[i] * p * (1.0 - p);
    }
    auto hess_vec = [&](const Vector& v) {
      const Vector xv = (x * v.head(d)).array() + v[d];
      const Vector dv = curv.cwiseProduct(xv);
      Vector out(d + 1);
      out.head(d) = v.head(d) + cost * (x.transpose() * dv);
      out[d] = cost * dv.sum();
      return out;
    };
    Vector precond(d + 1);
    for (Eigen::Index j = 0; j < d; ++j)
      precond[j] = 1.0 + cost * curv.dot(x.col(j).cwiseAbs2());
    precond[d] = std::max(cost * curv.sum(), 1e-12);

    // Preconditioned conjugate gradient on H s = -g.
    Vector step = Vector::Zero(d + 1);
    Vector r = -g;
    Vector zc = r.cwiseQuotient(precond);
    Vector p = zc;
    double rz = r.dot(zc);
    const double cg_tol = std::min(0.5, std::sqrt(g.norm())) * g.norm();
    const int cg_max = std::max<int>(50, 2 * static_cast<int>(d + 1));
    for (int k = 0; k < cg_max && r.norm() > cg_tol; ++k) {
      const Vector hp = hess_vec(p);
      const double php = p.dot(hp);
      if (!(php > 0)) break;
      const double a = rz / php;
      step += a * p;
      r -= a * hp;
      zc = r.cwiseQuotient(precond);
      const double rz_next = r.dot(zc);
      p = zc + (rz_next / rz) * p;
      rz = rz_next;
    }
    if (step.isZero(0.0)) step = -g.cwiseQuotient(precond);

    double slope = g.dot(step);
    if (!(slope < 0)) {
      step = -g.cwiseQuotient(precond);
      slope = g.dot(step);
    }
    double t = 1.0;
    Vector next;
    double f_next = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      next = theta + t * step;
      f_next = weighted_objective(x, y, alpha, cost, next);
      if (f_next <= f + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    theta = next;
    f = f_next;
    g = weighted_objective_gradient(x, y, alpha, cost, theta);
  }

  LinearModel model;
  model.weights = theta.head(d);
  model.intercept = theta[d];
  model.cost = cost;
  return model;
}

LinearModel trivial_linear_model(std::size_t dim, bool positive) {
  LinearModel m;
  m.weights = Vector::Zero(static_cast<Eigen::Index>(dim));
  m.intercept = positive ? std::log(3.0) : 0.0;
  return m;
}

namespace {

MetricCounts count_predictions(const Matrix& x, const Vector& y, const LinearModel& m) {
  MetricCounts c;
  const Vector z = (x * m.weights).array() + m.intercept;
  for (Eigen::Index i = 0; i < z.size(); ++i) c.add(y[i] > 0.5, decide(sigmoid(z[i])));
  return c;
}

Matrix take_rows(const Matrix& x, const std::vector<Eigen::Index>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

Vector take(const Vector& v, const std::vector<Eigen::Index>& rows) {
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[rows[i]];
  return out;
}

}  // namespace

CostSelection select_cost(const Matrix& x_standardized, const Vector& y, std::uint64_t seed,
                          const TrainOptions& options) {
  CostSelection sel;
  std::vector<Eigen::Index> pos, neg;
  for (Eigen::Index i = 0; i < y.size(); ++i) (y[i] > 0.5 ? pos : neg).push_back(i);
  if (pos.size() < kMinPerClassForSplit || neg.size() < kMinPerClassForSplit) {
    sel.cost = 1.0;
    sel.fell_back = true;
    return sel;
  }
  Rng rng(seed);
  shuffle(std::span(pos), rng);
  shuffle(std::span(neg), rng);
  const auto n_val_pos = static_cast<std::size_t>(std::llround(static_cast<double>(pos.size()) * kValidationFraction));
  const auto n_val_neg = static_cast<std::size_t>(std::llround(static_cast<double>(neg.size()) * kValidationFraction));
  std::vector<Eigen::Index> train_rows, val_rows;
  for (std::size_t i = 0; i < pos.size(); ++i) (i < n_val_pos ? val_rows : train_rows).push_back(pos[i]);
  for (std::size_t i = 0; i < neg.size(); ++i) (i < n_val_neg ? val_rows : train_rows).push_back(neg[i]);
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(val_rows.begin(), val_rows.end());

  const Matrix xt = take_rows(x_standardized, train_rows), xv = take_rows(x_standardized, val_rows);
  const Vector yt = take(y, train_rows), yv = take(y, val_rows);
  double best = -1.0;
  for (std::size_t k = 0; k < kCostGrid.size(); ++k) {
    const auto model = train_linear(xt, yt, kCostGrid[k], options);
    const auto report = compute_metrics(count_predictions(xv, yv, model));
    sel.validation_f1[k] = report.f1;
    if (report.f1 > best) {
      best = report.f1;
      sel.cost = kCostGrid[k];
    }
  }
  return sel;
}

double FittedLinear::predict_proba(std::span<const double> raw) const {
  if (raw.size() != static_cast<std::size_t>(model.weights.size()))
    throw InputError("feature dimension " + std::to_string(raw.size()) + " does not match model dimension " +
                     std::to_string(model.weights.size()));
  if (!standardized) {
    std::vector<double> clean(raw.begin(), raw.end());
    for (auto& v : clean)
      if (std::isnan(v)) v = 0.0;
    return sigmoid(model.decision_value(clean));
  }
  std::vector<double> z(raw.size());
  standardizer.transform_row(raw, z);
  return sigmoid(model.decision_value(z));
}

FittedLinear fit_linear_pipeline(const Matrix& raw, const Vector& y, const PipelineOptions& options) {
  if (raw.rows() != y.size()) throw InputError("feature/label row count mismatch");
  FittedLinear fit;
  fit.standardized = options.standardize;
  const auto d = static_cast<std::size_t>(raw.cols());
  const auto counts = count_classes(y);
  if (counts.pos == 0 || counts.neg == 0) {
    fit.trivial = true;
    fit.model = trivial_linear_model(d, counts.neg == 0 && counts.pos > 0);
    if (options.standardize) {
      fit.standardizer = raw.rows() >= 2 ? fit_standardizer(raw)
                                         : Standardizer(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0));
    }
    return fit;
  }
  Matrix x;
  if (options.standardize) {
    fit.standardizer = fit_standardizer(raw);
    x = fit.standardizer.transform(raw);
  } else {
    x = raw.unaryExpr([](double v) { return std::isnan(v) ? 0.0 : v; });
  }
  double cost = options.fixed_cost;
  if (options.grid_search) {
    fit.selection = select_cost(x, y, options.seed, options.train);
    cost = fit.selection.cost;
  } else {
    fit.selection.cost = cost;
  }
  fit.model = train_linear(x, y, cost, options.train);
  return fit;
}

double SingleSensorModel::predict_proba(const FeatureVector& features) const {
  if (features.sensor() != sensor) throw InputError("feature vector is for a different sensor");
  return fit.predict_proba(features.values());
}

}  // namespace ctxrec
