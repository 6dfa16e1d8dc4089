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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ctxrec/evaluation.hpp"
#include "ctxrec/experiment.hpp"
#include "ctxrec/personalization.hpp"

namespace ctxrec {

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Four decimals; empty for a missing value.
std::string format_score(std::optional<double> v);

void write_csv(std::ostream& out, const Table& table);
std::string to_csv(const Table& table);
std::string render_markdown(const Table& table);

// label, n_e, n_s, p99, one column per system. Two summary rows follow:
// "average" (undefined F1 counts as 0) and "average_defined" (only labels
// where the metric is defined).
Table evaluation_table(const EvaluationResult& result, Metric metric);
Table cost_table(const std::vector<CostChoice>& costs);
Table learned_weights_table(const EvaluationResult& result);

// Per-label universal/individual/adapted BA and F1, then an average over all
// labels and one over labels with at least `threshold` user positives.
Table personalization_table(const PersonalizationResult& result, std::uint64_t threshold);

// Row-normalized matrix with the class count per row; empty rows stay blank.
Table confusion_table(const ConfusionMatrix& matrix);

}  // namespace ctxrec
