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

#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>

namespace ctxrec::detail {

namespace {

// FFTW's planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

class RealForward {
 public:
  explicit RealForward(std::size_t n)
      : n_(n),
        in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        out_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), out_.get(), FFTW_ESTIMATE);
  }
  ~RealForward() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  RealForward(const RealForward&) = delete;
  RealForward& operator=(const RealForward&) = delete;

  double* input() { return in_.get(); }
  const fftw_complex* output() const { return out_.get(); }
  void execute() { fftw_execute(plan_); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::unique_ptr<double, FftwFree> in_;
  std::unique_ptr<fftw_complex, FftwFree> out_;
  fftw_plan plan_ = nullptr;
};

}  // namespace

std::vector<double> power_spectrum(std::span<const double> signal, std::size_t length) {
  const std::size_t n = std::max(length, signal.size());
  RealForward fft(n);
  std::fill(fft.input(), fft.input() + n, 0.0);
  std::copy(signal.begin(), signal.end(), fft.input());
  fft.execute();
  std::vector<double> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& c = fft.output()[k];
    out[k] = c[0] * c[0] + c[1] * c[1];
  }
  return out;
}

std::vector<double> autocorrelation(std::span<const double> signal) {
  const std::size_t n = signal.size();
  const std::size_t m = 2 * n;
  auto power = power_spectrum(signal, m);

  // Inverse of a real, even spectrum: c2r transform of |X|^2.
  std::unique_ptr<fftw_complex, FftwFree> spec(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (m / 2 + 1))));
  std::unique_ptr<double, FftwFree> out(static_cast<double*>(fftw_malloc(sizeof(double) * m)));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(m), spec.get(), out.get(), FFTW_ESTIMATE);
  }
  for (std::size_t k = 0; k < power.size(); ++k) {
    spec.get()[k][0] = power[k];
    spec.get()[k][1] = 0.0;
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<double> r(n);
  for (std::size_t l = 0; l < n; ++l) r[l] = out.get()[l] / static_cast<double>(m);
  return r;
}

}  // namespace ctxrec::detail
