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
#include <variant>

#include "ctxrec/classifier.hpp"
#include "ctxrec/fusion.hpp"

namespace ctxrec {

inline constexpr int kModelFormatVersion = 1;

using AnyModel = std::variant<SingleSensorModel, FusionModel>;

// Line-oriented text: a "ctxrec-model <version>" header, the model kind, and
// one block per linear layer. Doubles use the shortest exact representation,
// so a read-back model predicts bit-identically.
void write_model(std::ostream& out, const SingleSensorModel& model);
void write_model(std::ostream& out, const FusionModel& model);
void write_model(std::ostream& out, const AnyModel& model);

// Throws InputError on malformed input or an unsupported version.
AnyModel read_model(std::istream& in);

}  // namespace ctxrec
