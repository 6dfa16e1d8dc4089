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

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ctxrec/types.hpp"

namespace ctxrec {

// Rows are examples. NaN marks a masked entry.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<double> means, std::vector<double> stds);

  std::size_t dim() const { return means_.size(); }
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& stds() const { return stds_; }
  // Columns with no unmasked training entry.
  const std::vector<std::size_t>& empty_columns() const { return empty_columns_; }

  // (x - mean) / std, masked entries -> 0.
  Matrix transform(const Matrix& raw) const;
  void transform_row(std::span<const double> raw, std::span<double> out) const;

 private:
  friend Standardizer fit_standardizer(const Matrix& raw);
  std::vector<double> means_;
  std::vector<double> stds_;
  std::vector<std::size_t> empty_columns_;
};

// Population statistics over unmasked entries. Zero-variance and fully
// masked columns get std 1. Throws InputError for fewer than 2 rows.
Standardizer fit_standardizer(const Matrix& raw);

struct LinearModel {
  Vector weights;
  double intercept = 0.0;
  double cost = 1.0;

  double decision_value(std::span<const double> x) const;
};

double sigmoid(double z);

enum class ClassWeighting { Balanced, None };

struct TrainOptions {
  ClassWeighting weighting = ClassWeighting::Balanced;
  double gradient_tolerance = 1e-6;
  int max_iterations = 200;
};

// Per-example weights. Balanced: n / (2 n_class(y_i)), so both classes carry
// total weight n/2.
Vector sample_weights(const Vector& y, ClassWeighting weighting);

// 0.5 |w|^2 + C sum_i a_i logloss(y_i, w.x_i + b); the intercept is not penalized.
// `theta` holds w followed by b.
double weighted_objective(const Matrix& x, const Vector& y, const Vector& alpha, double cost,
                          const Vector& theta);
Vector weighted_objective_gradient(const Matrix& x, const Vector& y, const Vector& alpha,
                                   double cost, const Vector& theta);

// Minimizes the weighted objective with a truncated Newton method. Throws
// DegenerateError("degenerate label") unless both classes are present.
LinearModel train_linear(const Matrix& x, const Vector& y, double cost,
                         const TrainOptions& options = {});

inline constexpr std::array<double, 6> kCostGrid = {0.001, 0.01, 0.1, 1.0, 10.0, 100.0};
inline constexpr double kValidationFraction = 1.0 / 3.0;
inline constexpr std::size_t kMinPerClassForSplit = 3;

struct CostSelection {
  double cost = 1.0;
  bool fell_back = false;
  std::array<double, kCostGrid.size()> validation_f1{};
};

// Stratified split of one third for validation, F1-driven choice over
// kCostGrid, ties to the smaller cost. Falls back to C = 1 when either class
// has fewer than 3 examples.
CostSelection select_cost(const Matrix& x_standardized, const Vector& y, std::uint64_t seed,
                          const TrainOptions& options = {});

struct PipelineOptions {
  bool grid_search = true;
  double fixed_cost = 1.0;
  bool standardize = true;
  std::uint64_t seed = 0;
  TrainOptions train;
};

// Standardizer + linear model. A trivial model (single-class training data)
// has zero weights and always declares the training class.
struct FittedLinear {
  Standardizer standardizer;
  LinearModel model;
  CostSelection selection;
  bool trivial = false;
  bool standardized = true;

  double predict_proba(std::span<const double> raw) const;
};

FittedLinear fit_linear_pipeline(const Matrix& raw, const Vector& y, const PipelineOptions& options);

// Constant-output model: probability 0.5 (negative decision) for negative-only
// training data, 0.75 (positive decision) for positive-only data.
LinearModel trivial_linear_model(std::size_t dim, bool positive);

struct SingleSensorModel {
  Sensor sensor = Sensor::Acc;
  std::string label;
  FittedLinear fit;

  // Throws InputError on dimension mismatch.
  double predict_proba(const FeatureVector& features) const;
};

inline bool decide(double probability) { return probability > 0.5; }

}  // namespace ctxrec
