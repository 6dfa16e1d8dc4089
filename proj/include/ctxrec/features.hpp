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

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ctxrec/types.hpp"

namespace ctxrec {

// Sub-band edges in Hz. The final band is closed at Nyquist; all others are
// half-open [lo, hi).
struct SpectralConfig {
  std::array<double, 5> band_lower_edges_hz = {0.0, 0.5, 1.0, 3.0, 5.0};
  double log_floor_epsilon = 1e-12;
};

inline constexpr std::size_t kScalarFeatureCount = 17;
inline constexpr std::size_t kAxisStatisticCount = 9;
inline constexpr std::size_t kValueEntropyBins = 20;
inline constexpr double kLogRangeEpsilonDeg = 1e-6;
inline constexpr double kEarthRadiusMeters = 6371000.0;

// Positions inside the 17-entry scalar feature block.
namespace scalar_index {
inline constexpr std::size_t kMean = 0, kStd = 1, kMoment3 = 2, kMoment4 = 3, kP25 = 4, kP50 = 5,
                             kP75 = 6, kValueEntropy = 7, kTimeEntropy = 8, kBand0 = 9,
                             kSpectralEntropy = 14, kPeriod = 15, kPeriodValue = 16;
}

// Sample-wise euclidean norm. Throws InputError on an empty series.
std::vector<double> magnitude_series(const TriaxialSeries& series);

// Per-band (non-log) energies of the mean-removed signal. Energies are
// normalized so their sum equals the signal's variance.
std::array<double, 5> band_energies(std::span<const double> signal, double rate_hz,
                                    const SpectralConfig& config = {});

struct Periodicity {
  double period_seconds = 0.0;
  double normalized_value = 0.0;
  bool defined = false;
};

// Dominant periodicity from the normalized autocorrelation. The search starts
// after the first lag whose value falls below zero; when there is no such lag
// the period is the signal duration and the value 0.
Periodicity dominant_periodicity(std::span<const double> signal, double rate_hz);

double value_entropy(std::span<const double> signal);
double time_entropy(std::span<const double> signal);
double spectral_entropy(std::span<const double> signal);

// mean, std, moment3, moment4, p25, p50, p75, value-entropy, time-entropy,
// 5 band log energies, spectral entropy, period, period value.
// Throws InputError when the signal has fewer than 8 samples.
std::array<double, kScalarFeatureCount> scalar_series_features(std::span<const double> signal,
                                                                double rate_hz,
                                                                const SpectralConfig& config = {});

// Per-axis means, per-axis population stds, Pearson correlations (xy, xz, yz).
// Correlations involving a constant axis are 0.
std::array<double, kAxisStatisticCount> axis_statistics(const TriaxialSeries& series);

// Mean cosine similarity between sample directions, bucketed by time lag
// [0,0.5) [0.5,1) [1,5) [5,10) [10,inf) seconds. Empty buckets are masked.
struct RelativeDirections {
  std::array<double, 5> mean_cosine{};
  std::array<bool, 5> defined{};
};
RelativeDirections relative_direction_features(const TriaxialSeries& series);

FeatureVector extract_motion_features(const TriaxialSeries& series, Sensor sensor = Sensor::Acc);
FeatureVector extract_watch_features(const TriaxialSeries& series);
FeatureVector extract_location_features(const LocationSeries& series);

inline constexpr double kAudioSampleRate = 22050.0;
inline constexpr std::size_t kMfccWindow = 2048;
inline constexpr std::size_t kMfccHop = 1024;
inline constexpr std::size_t kMelBands = 40;

// 13 MFCCs per half-overlapping 2048-sample frame: Hann window, power
// spectrum, 40 HTK-mel triangular filters over 0..Nyquist, natural log with a
// 1e-10 floor, orthonormal DCT-II. Throws InputError for fewer than 2048 samples.
AudioMfccSeries compute_mfcc(std::span<const double> audio);

// Orthonormal DCT-II of log mel energies, first 13 coefficients.
std::array<double, kMfccCoefficients> mfcc_from_log_mel(std::span<const double> log_mel);

FeatureVector extract_audio_features(const AudioMfccSeries& mfcc);

// The two active time-of-day bins for an hour; bins start at 0,3,...,21 and
// each covers six hours.
std::array<bool, 8> time_of_day_bins(int hour);
FeatureVector extract_phone_state_features(const PhoneStateSnapshot& ps);

// Extracts every sensor present in the example's raw payloads into
// example.features.
void extract_all_features(Example& example);

// Column names in the public dataset's naming scheme, in the order this
// library emits them.
const std::vector<std::string>& feature_column_names(Sensor sensor);

double haversine_meters(double lat1, double lon1, double lat2, double lon2);

}  // namespace ctxrec
