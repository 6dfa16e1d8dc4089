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

#include "ctxrec/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "fft.hpp"

namespace ctxrec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double central_moment(std::span<const double> x, double mean, int order) {
  double acc = 0.0;
  for (double v : x) acc += std::pow(v - mean, order);
  return acc / static_cast<double>(x.size());
}

// Linear interpolation between closest ranks.
double percentile(std::vector<double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double entropy_of_weights(std::span<const double> w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0)) return 0.0;
  double h = 0.0;
  for (double v : w) {
    if (v > 0) {
      const double p = v / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

std::vector<double> demeaned(std::span<const double> x) {
  const double m = mean_of(x);
  std::vector<double> out(x.begin(), x.end());
  for (auto& v : out) v -= m;
  return out;
}

// One-sided spectrum of the mean-removed signal, scaled so the bins sum to the
// signal variance.
std::vector<double> one_sided_energy(std::span<const double> signal) {
  const auto n = signal.size();
  const auto centered = demeaned(signal);
  auto power = detail::power_spectrum(centered);
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  for (std::size_t k = 0; k < power.size(); ++k) {
    const bool unpaired = (k == 0) || (n % 2 == 0 && k == n / 2);
    power[k] *= (unpaired ? 1.0 : 2.0) / n2;
  }
  return power;
}

std::vector<double> axis_signal(const TriaxialSeries& s, int axis) {
  std::vector<double> out(s.size());
  for (std::size_t t = 0; t < s.size(); ++t) out[t] = s.samples[t][axis];
  return out;
}

double population_std(std::span<const double> x, double mean) {
  return std::sqrt(central_moment(x, mean, 2));
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const double ma = mean_of(a), mb = mean_of(b);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0) || !(sbb > 0)) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::array<double, 5> log_band_energies(std::span<const double> signal, double rate,
                                        const SpectralConfig& config) {
  auto e = band_energies(signal, rate, config);
  for (auto& v : e) v = std::log(v + config.log_floor_epsilon);
  return e;
}

void check_series(const TriaxialSeries& s) {
  if (s.samples.empty()) throw InputError("empty signal");
  if (s.relative_timestamps.size() != s.samples.size())
    throw InputError("timestamps and samples differ in length");
}

}  // namespace

std::vector<double> magnitude_series(const TriaxialSeries& series) {
  if (series.samples.empty()) throw InputError("empty signal");
  std::vector<double> out(series.size());
  for (std::size_t t = 0; t < series.size(); ++t) {
    const auto& v = series.samples[t];
    out[t] = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  }
  return out;
}

std::array<double, 5> band_energies(std::span<const double> signal, double rate_hz,
                                    const SpectralConfig& config) {
  const auto n = signal.size();
  const auto energy = one_sided_energy(signal);
  std::array<double, 5> bands{};
  const auto& edges = config.band_lower_edges_hz;
  for (std::size_t k = 0; k < energy.size(); ++k) {
    const double f = static_cast<double>(k) * rate_hz / static_cast<double>(n);
    std::size_t b = 0;
    while (b + 1 < edges.size() && f >= edges[b + 1]) ++b;
    bands[b] += energy[k];
  }
  return bands;
}

Periodicity dominant_periodicity(std::span<const double> signal, double rate_hz) {
  const auto n = signal.size();
  const double duration = static_cast<double>(n) / rate_hz;
  const auto r = detail::autocorrelation(demeaned(signal));
  Periodicity sentinel{duration, 0.0, false};
  if (!(r[0] > 0)) return sentinel;

  std::size_t first_negative = 0;
  for (std::size_t l = 1; l < n; ++l) {
    if (r[l] / r[0] < 0) {
      first_negative = l;
      break;
    }
  }
  if (first_negative == 0) return sentinel;

  std::size_t best = first_negative;
  for (std::size_t l = first_negative + 1; l < n; ++l)
    if (r[l] > r[best]) best = l;
  return {static_cast<double>(best) / rate_hz, std::clamp(r[best] / r[0], -1.0, 1.0), true};
}

double value_entropy(std::span<const double> signal) {
  const auto [lo_it, hi_it] = std::minmax_element(signal.begin(), signal.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) return 0.0;
  std::array<double, kValueEntropyBins> counts{};
  for (double v : signal) {
    auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * kValueEntropyBins);
    counts[std::min(b, kValueEntropyBins - 1)] += 1.0;
  }
  return entropy_of_weights(counts);
}

double time_entropy(std::span<const double> signal) {
  std::vector<double> w(signal.begin(), signal.end());
  for (auto& v : w) v = std::abs(v);
  return entropy_of_weights(w);
}

double spectral_entropy(std::span<const double> signal) {
  return entropy_of_weights(one_sided_energy(signal));
}

std::array<double, kScalarFeatureCount> scalar_series_features(std::span<const double> signal,
                                                                double rate_hz,
                                                                const SpectralConfig& config) {
  if (signal.size() < 8) throw InputError("signal too short: at least 8 samples required");
  std::array<double, kScalarFeatureCount> out{};
  using namespace scalar_index;
  const double m = mean_of(signal);
  out[kMean] = m;
  out[kStd] = population_std(signal, m);
  out[kMoment3] = central_moment(signal, m, 3);
  out[kMoment4] = central_moment(signal, m, 4);
  std::vector<double> sorted(signal.begin(), signal.end());
  std::sort(sorted.begin(), sorted.end());
  out[kP25] = percentile(sorted, 0.25);
  out[kP50] = percentile(sorted, 0.50);
  out[kP75] = percentile(sorted, 0.75);
  out[kValueEntropy] = value_entropy(signal);
  out[kTimeEntropy] = time_entropy(signal);
  const auto bands = log_band_energies(signal, rate_hz, config);
  std::copy(bands.begin(), bands.end(), out.begin() + kBand0);
  out[kSpectralEntropy] = spectral_entropy(signal);
  const auto p = dominant_periodicity(signal, rate_hz);
  out[kPeriod] = p.period_seconds;
  out[kPeriodValue] = p.normalized_value;
  return out;
}

std::array<double, kAxisStatisticCount> axis_statistics(const TriaxialSeries& series) {
  check_series(series);
  if (series.size() < 2) throw InputError("axis statistics need at least 2 samples");
  std::array<std::vector<double>, 3> axes = {axis_signal(series, 0), axis_signal(series, 1),
                                             axis_signal(series, 2)};
  std::array<double, kAxisStatisticCount> out{};
  for (int a = 0; a < 3; ++a) {
    out[a] = mean_of(axes[a]);
    out[3 + a] = population_std(axes[a], out[a]);
  }
  out[6] = pearson(axes[0], axes[1]);
  out[7] = pearson(axes[0], axes[2]);
  out[8] = pearson(axes[1], axes[2]);
  return out;
}

RelativeDirections relative_direction_features(const TriaxialSeries& series) {
  check_series(series);
  constexpr std::array<double, 4> kLagEdges = {0.5, 1.0, 5.0, 10.0};
  const auto n = series.size();
  std::vector<std::array<double, 3>> unit(n);
  std::vector<bool> valid(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& v = series.samples[t];
    const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    valid[t] = norm > 0;
    if (valid[t]) unit[t] = {v[0] / norm, v[1] / norm, v[2] / norm};
  }
  std::array<double, 5> sum{};
  std::array<std::size_t, 5> count{};
  for (std::size_t i = 0; i < n; ++i) {
    if (!valid[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!valid[j]) continue;
      const double lag = std::abs(series.relative_timestamps[j] - series.relative_timestamps[i]);
      std::size_t b = 0;
      while (b < kLagEdges.size() && lag >= kLagEdges[b]) ++b;
      sum[b] += unit[i][0] * unit[j][0] + unit[i][1] * unit[j][1] + unit[i][2] * unit[j][2];
      ++count[b];
    }
  }
  RelativeDirections out;
  for (std::size_t b = 0; b < 5; ++b) {
    out.defined[b] = count[b] > 0;
    out.mean_cosine[b] = out.defined[b] ? sum[b] / static_cast<double>(count[b]) : kNaN;
  }
  return out;
}

FeatureVector extract_motion_features(const TriaxialSeries& series, Sensor sensor) {
  check_series(series);
  const auto mag = magnitude_series(series);
  const auto scalar = scalar_series_features(mag, series.nominal_rate);
  const auto axes = axis_statistics(series);
  std::vector<double> v(scalar.begin(), scalar.end());
  v.insert(v.end(), axes.begin(), axes.end());
  if (sensor == Sensor::WAcc) sensor = Sensor::Acc;
  return FeatureVector(sensor, std::move(v));
}

FeatureVector extract_watch_features(const TriaxialSeries& series) {
  const auto base = extract_motion_features(series, Sensor::Acc);
  std::vector<double> v(base.values().begin(), base.values().end());
  std::vector<std::uint8_t> mask(v.size(), 0);
  const SpectralConfig config;
  for (int a = 0; a < 3; ++a) {
    const auto bands = log_band_energies(axis_signal(series, a), series.nominal_rate, config);
    v.insert(v.end(), bands.begin(), bands.end());
  }
  mask.resize(v.size(), 0);
  const auto dirs = relative_direction_features(series);
  for (std::size_t b = 0; b < 5; ++b) {
    v.push_back(dirs.mean_cosine[b]);
    mask.push_back(dirs.defined[b] ? 0 : 1);
  }
  return FeatureVector(Sensor::WAcc, std::move(v), std::move(mask));
}

double haversine_meters(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * kDeg, dlon = (lon2 - lon1) * kDeg;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * kDeg) * std::cos(lat2 * kDeg) * std::sin(dlon / 2) *
                       std::sin(dlon / 2);
  return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(a)));
}

FeatureVector extract_location_features(const LocationSeries& series) {
  std::vector<double> v(sensor_dim(Sensor::Loc), kNaN);
  std::vector<std::uint8_t> mask(v.size(), 1);
  auto set = [&](std::size_t i, double value) {
    v[i] = value;
    mask[i] = 0;
  };

  struct Fix {
    double t, lat, lon;
  };
  std::vector<Fix> fixes;
  for (const auto& u : series.updates)
    if (u.latitude && u.longitude) fixes.push_back({u.relative_time, *u.latitude, *u.longitude});

  if (series.quick_features) {
    for (std::size_t i = 0; i < 6; ++i) set(i, (*series.quick_features)[i]);
  } else if (!fixes.empty()) {
    std::vector<double> lats, lons;
    for (const auto& f : fixes) lats.push_back(f.lat), lons.push_back(f.lon);
    set(0, population_std(lats, mean_of(lats)));
    set(1, population_std(lons, mean_of(lons)));
    set(2, fixes.back().lat - fixes.front().lat);
    set(3, fixes.back().lon - fixes.front().lon);
    double dlat = 0, dlon = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 1; i < fixes.size(); ++i) {
      const double dt = fixes[i].t - fixes[i - 1].t;
      if (!(dt > 0)) continue;
      dlat += std::abs(fixes[i].lat - fixes[i - 1].lat) / dt;
      dlon += std::abs(fixes[i].lon - fixes[i - 1].lon) / dt;
      ++pairs;
    }
    if (pairs > 0) {
      set(4, dlat / static_cast<double>(pairs));
      set(5, dlon / static_cast<double>(pairs));
    }
  }

  set(6, static_cast<double>(series.updates.size()));

  auto range_of = [](const std::vector<double>& xs) {
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    return *hi - *lo;
  };
  std::vector<double> lats, lons, alts, speeds, vacc, hacc;
  for (const auto& u : series.updates) {
    if (u.latitude) lats.push_back(*u.latitude);
    if (u.longitude) lons.push_back(*u.longitude);
    if (u.altitude) alts.push_back(*u.altitude);
    if (u.speed && *u.speed >= 0) speeds.push_back(*u.speed);
    if (u.vertical_accuracy && *u.vertical_accuracy >= 0) vacc.push_back(*u.vertical_accuracy);
    if (u.horizontal_accuracy && *u.horizontal_accuracy >= 0) hacc.push_back(*u.horizontal_accuracy);
  }
  if (!lats.empty()) set(7, std::log(range_of(lats) + kLogRangeEpsilonDeg));
  if (!lons.empty()) set(8, std::log(range_of(lons) + kLogRangeEpsilonDeg));
  if (!alts.empty()) {
    set(9, *std::min_element(alts.begin(), alts.end()));
    set(10, *std::max_element(alts.begin(), alts.end()));
  }
  if (!speeds.empty()) {
    set(11, *std::min_element(speeds.begin(), speeds.end()));
    set(12, *std::max_element(speeds.begin(), speeds.end()));
  }
  if (!vacc.empty()) set(13, *std::min_element(vacc.begin(), vacc.end()));
  if (!hacc.empty()) set(14, *std::min_element(hacc.begin(), hacc.end()));
  if (!fixes.empty()) {
    double diameter = 0.0;
    for (std::size_t i = 0; i < fixes.size(); ++i)
      for (std::size_t j = i + 1; j < fixes.size(); ++j)
        diameter = std::max(diameter,
                            haversine_meters(fixes[i].lat, fixes[i].lon, fixes[j].lat, fixes[j].lon));
    set(15, diameter);
    set(16, std::log(diameter + kLogRangeEpsilonDeg));
  }
  return FeatureVector(Sensor::Loc, std::move(v), std::move(mask));
}

namespace {

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

// 40 x 1025 triangular weights on the FFT bin frequencies.
const std::vector<std::vector<double>>& mel_filterbank() {
  static const auto bank = [] {
    const std::size_t bins = kMfccWindow / 2 + 1;
    const double nyquist = kAudioSampleRate / 2.0;
    std::vector<double> edges(kMelBands + 2);
    const double top = hz_to_mel(nyquist);
    for (std::size_t i = 0; i < edges.size(); ++i)
      edges[i] = mel_to_hz(top * static_cast<double>(i) / static_cast<double>(kMelBands + 1));
    std::vector<std::vector<double>> w(kMelBands, std::vector<double>(bins, 0.0));
    for (std::size_t m = 0; m < kMelBands; ++m) {
      const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
      for (std::size_t k = 0; k < bins; ++k) {
        const double f = static_cast<double>(k) * kAudioSampleRate / kMfccWindow;
        if (f > lo && f < mid) w[m][k] = (f - lo) / (mid - lo);
        else if (f >= mid && f < hi) w[m][k] = (hi - f) / (hi - mid);
      }
    }
    return w;
  }();
  return bank;
}

const std::vector<double>& hann_window() {
  static const auto w = [] {
    std::vector<double> out(kMfccWindow);
    for (std::size_t i = 0; i < kMfccWindow; ++i)
      out[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / kMfccWindow);
    return out;
  }();
  return w;
}

}  // namespace

std::array<double, kMfccCoefficients> mfcc_from_log_mel(std::span<const double> log_mel) {
  const auto m = static_cast<double>(log_mel.size());
  std::array<double, kMfccCoefficients> out{};
  for (std::size_t j = 0; j < kMfccCoefficients; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < log_mel.size(); ++i)
      acc += log_mel[i] * std::cos(std::numbers::pi * static_cast<double>(j) *
                                   (static_cast<double>(i) + 0.5) / m);
    out[j] = acc * std::sqrt((j == 0 ? 1.0 : 2.0) / m);
  }
  return out;
}

AudioMfccSeries compute_mfcc(std::span<const double> audio) {
  if (audio.size() < kMfccWindow) throw InputError("audio too short");
  const std::size_t frames = (audio.size() - kMfccWindow) / kMfccHop + 1;
  const auto& bank = mel_filterbank();
  const auto& window = hann_window();
  AudioMfccSeries out;
  out.frames.reserve(frames);
  std::vector<double> buf(kMfccWindow);
  std::vector<double> log_mel(kMelBands);
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t i = 0; i < kMfccWindow; ++i) buf[i] = audio[f * kMfccHop + i] * window[i];
    const auto power = detail::power_spectrum(buf);
    for (std::size_t m = 0; m < kMelBands; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < power.size(); ++k) e += bank[m][k] * power[k];
      log_mel[m] = std::log(e + 1e-10);
    }
    const auto c = mfcc_from_log_mel(log_mel);
    out.frames.emplace_back(c.begin(), c.end());
  }
  return out;
}

FeatureVector extract_audio_features(const AudioMfccSeries& mfcc) {
  if (mfcc.frames.empty()) throw InputError("MFCC series has no frames");
  std::vector<double> v(2 * kMfccCoefficients, 0.0);
  const auto n = static_cast<double>(mfcc.frames.size());
  for (const auto& frame : mfcc.frames) {
    if (frame.size() != kMfccCoefficients) throw InputError("MFCC frame must have 13 coefficients");
    for (std::size_t j = 0; j < kMfccCoefficients; ++j) v[j] += frame[j] / n;
  }
  for (const auto& frame : mfcc.frames)
    for (std::size_t j = 0; j < kMfccCoefficients; ++j) {
      const double d = frame[j] - v[j];
      v[kMfccCoefficients + j] += d * d / n;
    }
  for (std::size_t j = 0; j < kMfccCoefficients; ++j)
    v[kMfccCoefficients + j] = std::sqrt(v[kMfccCoefficients + j]);
  return FeatureVector(Sensor::Aud, std::move(v));
}

std::array<bool, 8> time_of_day_bins(int hour) {
  if (hour < 0 || hour > 23) throw InputError("hour must be within [0, 23]");
  std::array<bool, 8> bins{};
  for (int b = 0; b < 8; ++b) {
    const int offset = ((hour - 3 * b) % 24 + 24) % 24;
    bins[b] = offset < 6;
  }
  return bins;
}

FeatureVector extract_phone_state_features(const PhoneStateSnapshot& ps) {
  std::vector<double> v;
  v.reserve(sensor_dim(Sensor::PS));
  auto one_hot = [&v](auto value, int options) {
    for (int i = 0; i < options; ++i) v.push_back(static_cast<int>(value) == i ? 1.0 : 0.0);
  };
  one_hot(ps.app_state, 4);
  one_hot(ps.battery_plugged, 4);
  one_hot(ps.battery_state, 7);
  one_hot(ps.in_phone_call, 3);
  one_hot(ps.ringer_mode, 4);
  one_hot(ps.wifi_status, 4);
  for (bool b : time_of_day_bins(ps.hour_of_day)) v.push_back(b ? 1.0 : 0.0);
  return FeatureVector(Sensor::PS, std::move(v));
}

void extract_all_features(Example& example) {
  const auto& d = example.sensor_data;
  auto& f = example.features;
  if (d.acc) f[sensor_index(Sensor::Acc)] = extract_motion_features(*d.acc, Sensor::Acc);
  if (d.gyro) f[sensor_index(Sensor::Gyro)] = extract_motion_features(*d.gyro, Sensor::Gyro);
  if (d.watch_acc) f[sensor_index(Sensor::WAcc)] = extract_watch_features(*d.watch_acc);
  if (d.location) f[sensor_index(Sensor::Loc)] = extract_location_features(*d.location);
  if (d.audio) f[sensor_index(Sensor::Aud)] = extract_audio_features(*d.audio);
  if (d.phone_state) f[sensor_index(Sensor::PS)] = extract_phone_state_features(*d.phone_state);
}

namespace {

std::vector<std::string> motion_columns(const std::string& prefix) {
  std::vector<std::string> out;
  for (auto s : {"mean", "std", "moment3", "moment4", "percentile25", "percentile50",
                 "percentile75", "value_entropy", "time_entropy"})
    out.push_back(prefix + ":magnitude_stats:" + s);
  for (int b = 0; b < 5; ++b)
    out.push_back(prefix + ":magnitude_spectrum:log_energy_band" + std::to_string(b));
  out.push_back(prefix + ":magnitude_spectrum:spectral_entropy");
  out.push_back(prefix + ":magnitude_autocorrelation:period");
  out.push_back(prefix + ":magnitude_autocorrelation:normalized_ac");
  for (auto s : {"mean_x", "mean_y", "mean_z", "std_x", "std_y", "std_z", "ro_xy", "ro_xz", "ro_yz"})
    out.push_back(prefix + ":3d:" + s);
  return out;
}

std::vector<std::vector<std::string>> build_column_names() {
  std::vector<std::vector<std::string>> out(kNumSensors);
  out[0] = motion_columns("raw_acc");
  out[1] = motion_columns("proc_gyro");
  out[2] = motion_columns("watch_acceleration");
  for (auto axis : {"x", "y", "z"})
    for (int b = 0; b < 5; ++b)
      out[2].push_back(std::string("watch_acceleration:spectrum:") + axis + "_log_energy_band" +
                       std::to_string(b));
  for (int b = 0; b < 5; ++b)
    out[2].push_back("watch_acceleration:relative_directions:avr_cosine_similarity_lag_range" +
                     std::to_string(b));
  for (auto s : {"std_lat", "std_long", "lat_change", "long_change", "mean_abs_lat_deriv",
                 "mean_abs_long_deriv"})
    out[3].push_back(std::string("location_quick_features:") + s);
  for (auto s : {"num_valid_updates", "log_latitude_range", "log_longitude_range", "min_altitude",
                 "max_altitude", "min_speed", "max_speed", "best_vertical_accuracy",
                 "best_horizontal_accuracy", "diameter", "log_diameter"})
    out[3].push_back(std::string("location:") + s);
  for (auto stat : {"mean", "std"})
    for (std::size_t j = 0; j < kMfccCoefficients; ++j)
      out[4].push_back("audio_naive:mfcc" + std::to_string(j) + ":" + stat);
  const std::pair<const char*, std::vector<const char*>> groups[] = {
      {"app_state", {"is_active", "is_inactive", "is_background", "missing"}},
      {"battery_plugged", {"is_ac", "is_usb", "is_wireless", "missing"}},
      {"battery_state",
       {"is_unknown", "is_unplugged", "is_not_charging", "is_discharging", "is_charging", "is_full",
        "missing"}},
      {"on_the_phone", {"is_False", "is_True", "missing"}},
      {"ringer_mode", {"is_normal", "is_silent_no_vibrate", "is_silent_with_vibrate", "missing"}},
      {"wifi_status",
       {"is_not_reachable", "is_reachable_via_wifi", "is_reachable_via_wwan", "missing"}},
  };
  for (const auto& [group, values] : groups)
    for (auto v : values) out[5].push_back(std::string("discrete:") + group + ":" + v);
  for (int b = 0; b < 8; ++b) {
    const int lo = 3 * b, hi = (3 * b + 6) == 24 ? 24 : (3 * b + 6) % 24;
    out[5].push_back("discrete:time_of_day:between" + std::to_string(lo) + "and" + std::to_string(hi));
  }
  return out;
}

}  // namespace

const std::vector<std::string>& feature_column_names(Sensor sensor) {
  static const auto names = build_column_names();
  return names[sensor_index(sensor)];
}

}  // namespace ctxrec
