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

#include <span>
#include <vector>

namespace ctxrec::detail {

// Squared magnitudes |X_k|^2, k = 0..n/2, of the length-n DFT of `signal`
// (zero-padded to `length` when it is larger than the signal).
std::vector<double> power_spectrum(std::span<const double> signal, std::size_t length = 0);

// Unnormalized linear (non-circular) autocorrelation r[l] = sum_t x[t] x[t+l]
// for l = 0..n-1.
std::vector<double> autocorrelation(std::span<const double> signal);

}  // namespace ctxrec::detail
