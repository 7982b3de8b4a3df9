// Copyright 2026 The chronocycle Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "chronocycle/error.hpp"

namespace chronocycle {

/// Uniformly sampled scalar signal: sample i is taken at t0 + i*dt.
class TimeSeries {
 public:
  TimeSeries(double t0, double dt, std::vector<double> values)
      : t0_(t0), dt_(dt), values_(std::move(values)) {
    if (!(dt_ > 0.0)) throw DataError("time series needs dt > 0");
    if (values_.size() < 2) throw DataError("time series needs at least 2 samples");
  }

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::size_t size() const { return values_.size(); }
  double t_end() const { return t0_ + dt_ * static_cast<double>(values_.size() - 1); }
  double time(std::size_t i) const { return t0_ + dt_ * static_cast<double>(i); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Linear interpolation; `t` is clamped to [t0, t_end].
  double at(double t) const {
    const double pos = std::clamp((t - t0_) / dt_, 0.0, static_cast<double>(size() - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(pos), size() - 2);
    const double frac = pos - static_cast<double>(i);
    return values_[i] + frac * (values_[i + 1] - values_[i]);
  }

 private:
  double t0_;
  double dt_;
  std::vector<double> values_;
};

struct SpectralPeak {
  double frequency;  // rad / time unit
  double amplitude;
};

/// Prominent peaks of a magnitude spectrum, ascending in frequency.
struct SpectrumSupport {
  std::vector<SpectralPeak> peaks;
  double threshold = 0.0;  // absolute amplitude cut used to select peaks

  double min_frequency() const { return peaks.empty() ? 0.0 : peaks.front().frequency; }
};

namespace detail {

struct FftwPlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

/// One-sided amplitude spectrum of the Hann-windowed, mean-removed signal.
/// Entry k corresponds to angular frequency 2*pi*k / (n*dt).
inline std::vector<double> amplitude_spectrum(std::span<const double> values) {
  const std::size_t n = values.size();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1))));
  double window_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                           static_cast<double>(n - 1)));
    window_sum += w;
    in.get()[i] = (values[i] - mean) * w;
  }
  std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan(
      fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  fftw_execute(plan.get());

  std::vector<double> amp(n / 2 + 1);
  for (std::size_t k = 0; k < amp.size(); ++k)
    amp[k] = 2.0 * std::hypot(out.get()[k][0], out.get()[k][1]) / window_sum;
  return amp;
}

}  // namespace detail

/// Spectral peaks of `ts` whose amplitude reaches `threshold_fraction` of the
/// largest one. Peak locations are refined by parabolic interpolation.
inline SpectrumSupport spectrum(const TimeSeries& ts, double threshold_fraction = 0.1) {
  if (ts.size() < 4) throw DataError("spectrum needs at least 4 samples");
  if (!(threshold_fraction > 0.0 && threshold_fraction <= 1.0))
    throw DataError("threshold_fraction must lie in (0, 1]");

  const auto amp = detail::amplitude_spectrum(ts.values());
  double scale = 0.0;
  for (double v : ts.values()) scale = std::max(scale, std::abs(v));
  double peak_max = 0.0;
  for (std::size_t k = 1; k < amp.size(); ++k) peak_max = std::max(peak_max, amp[k]);
  if (peak_max <= 1e-10 * std::max(1.0, scale)) throw DataError("empty spectrum");

  const double bin = 2.0 * std::numbers::pi / (static_cast<double>(ts.size()) * ts.dt());
  SpectrumSupport out;
  out.threshold = threshold_fraction * peak_max;
  const std::size_t last = amp.size() - 1;
  for (std::size_t k = 1; k <= last; ++k) {
    const double left = amp[k - 1];
    const double right = k < last ? amp[k + 1] : 0.0;
    if (!(amp[k] > left && amp[k] >= right && amp[k] >= out.threshold)) continue;
    double offset = 0.0;
    double height = amp[k];
    if (k < last) {
      const double denom = left - 2.0 * amp[k] + right;
      if (denom < 0.0) {
        offset = 0.5 * (left - right) / denom;
        height = amp[k] - 0.25 * (left - right) * offset;
      }
    }
    out.peaks.push_back({(static_cast<double>(k) + offset) * bin, height});
  }
  return out;
}

/// Number of embedding coordinates: each real tone is a conjugate pair of
/// complex exponentials, so two coordinates per peak.
inline int embedding_dimension(const SpectrumSupport& s) {
  if (s.peaks.empty()) throw DataError("embedding dimension needs at least one peak");
  return 2 * static_cast<int>(s.peaks.size());
}

/// Columns of the exponential matrix: one per retained frequency and its
/// conjugate, rows m = 0..d-1 hold exp(i*omega*tau*m).
inline std::vector<std::vector<std::complex<double>>> exponential_columns(
    const SpectrumSupport& s, int d, double tau) {
  std::vector<std::vector<std::complex<double>>> cols;
  for (const auto& p : s.peaks) {
    for (double sign : {1.0, -1.0}) {
      std::vector<std::complex<double>> col(static_cast<std::size_t>(d));
      for (int m = 0; m < d; ++m)
        col[static_cast<std::size_t>(m)] = std::polar(1.0, sign * p.frequency * tau * m);
      cols.push_back(std::move(col));
    }
  }
  return cols;
}

/// Mean over distinct column pairs of |<a, b>| / d. Zero means the columns
/// are pairwise orthogonal, one means they coincide.
struct MeanAbsCoherence {
  double operator()(const SpectrumSupport& s, int d, double tau) const {
    const auto cols = exponential_columns(s, d, tau);
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < cols.size(); ++a) {
      for (std::size_t b = a + 1; b < cols.size(); ++b) {
        std::complex<double> dot = 0.0;
        for (int m = 0; m < d; ++m)
          dot += std::conj(cols[a][static_cast<std::size_t>(m)]) * cols[b][static_cast<std::size_t>(m)];
        total += std::abs(dot) / d;
        ++pairs;
      }
    }
    return pairs == 0 ? 0.0 : total / static_cast<double>(pairs);
  }
};

/// Worst pair instead of the mean.
struct MaxAbsCoherence {
  double operator()(const SpectrumSupport& s, int d, double tau) const {
    const auto cols = exponential_columns(s, d, tau);
    double worst = 0.0;
    for (std::size_t a = 0; a < cols.size(); ++a) {
      for (std::size_t b = a + 1; b < cols.size(); ++b) {
        std::complex<double> dot = 0.0;
        for (int m = 0; m < d; ++m)
          dot += std::conj(cols[a][static_cast<std::size_t>(m)]) * cols[b][static_cast<std::size_t>(m)];
        worst = std::max(worst, std::abs(dot) / d);
      }
    }
    return worst;
  }
};

using OrthogonalityScore = std::function<double(const SpectrumSupport&, int, double)>;

inline double orthogonality_score(const SpectrumSupport& s, int d, double tau) {
  return MeanAbsCoherence{}(s, d, tau);
}

/// `count` evenly spaced delays k*tau_max/count, k = 1..count.
inline std::vector<double> uniform_delay_grid(double tau_max, std::size_t count) {
  if (!(tau_max > 0.0) || count == 0) throw DataError("delay grid needs tau_max > 0 and count > 0");
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k)
    grid[k] = tau_max * static_cast<double>(k + 1) / static_cast<double>(count);
  return grid;
}

/// Default grid: 200 delays spanning (0, longest period].
inline std::vector<double> default_delay_grid(const SpectrumSupport& s, std::size_t count = 200) {
  if (s.peaks.empty()) throw DataError("delay grid needs at least one peak");
  return uniform_delay_grid(2.0 * std::numbers::pi / s.min_frequency(), count);
}

struct DelayScan {
  double tau = 0.0;
  double score = 0.0;
  std::vector<std::pair<double, double>> curve;  // (tau, score) per grid point
};

/// Scans `grid`; the minimum score wins, ties go to the smaller delay.
inline DelayScan scan_delays(const SpectrumSupport& s, int d, std::span<const double> grid,
                             const OrthogonalityScore& score = MeanAbsCoherence{}) {
  if (grid.empty()) throw DataError("delay grid is empty");
  DelayScan out;
  bool first = true;
  for (double tau : grid) {
    if (!(tau > 0.0)) throw DataError("delay grid values must be positive");
    const double v = score(s, d, tau);
    out.curve.emplace_back(tau, v);
    if (first || v < out.score || (v == out.score && tau < out.tau)) {
      out.tau = tau;
      out.score = v;
      first = false;
    }
  }
  return out;
}

inline double optimal_delay(const SpectrumSupport& s, int d, std::span<const double> grid) {
  return scan_delays(s, d, grid).tau;
}

/// Window of `dimension` samples spaced `tau` apart.
struct EmbeddingParams {
  int dimension = 2;
  double tau = 1.0;
};

/// Embedded points with their time labels (window start times).
class LabeledPointCloud {
 public:
  LabeledPointCloud() = default;

  LabeledPointCloud(std::size_t dimension, std::vector<double> coordinates, std::vector<double> labels)
      : dimension_(dimension), coords_(std::move(coordinates)), labels_(std::move(labels)) {
    if (dimension_ == 0) throw DataError("point cloud dimension must be positive");
    if (coords_.size() != dimension_ * labels_.size())
      throw DataError("point cloud needs one label per point");
    for (std::size_t i = 1; i < labels_.size(); ++i)
      if (!(labels_[i - 1] < labels_[i])) throw DataError("time labels must be strictly increasing");
  }

  std::size_t size() const { return labels_.size(); }
  std::size_t dimension() const { return dimension_; }
  bool empty() const { return labels_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dimension_, dimension_};
  }
  std::span<const double> coordinates() const { return coords_; }
  std::span<const double> labels() const { return labels_; }
  double label(std::size_t i) const { return labels_[i]; }

 private:
  std::size_t dimension_ = 1;
  std::vector<double> coords_;
  std::vector<double> labels_;
};

/// Point j is (f(t_j), f(t_j + tau), ..., f(t_j + (d-1) tau)) for every
/// sample time t_j whose window fits; off-grid values are interpolated.
inline LabeledPointCloud sliding_window(const TimeSeries& ts, const EmbeddingParams& p) {
  if (p.dimension < 1) throw DataError("embedding dimension must be >= 1");
  if (!(p.tau > 0.0)) throw DataError("delay must be positive");
  const double span = static_cast<double>(p.dimension - 1) * p.tau;
  const double duration = ts.t_end() - ts.t0();
  const double slack = 1e-9 * ts.dt();
  if (span > duration + slack) throw DataError("window exceeds series");

  const auto d = static_cast<std::size_t>(p.dimension);
  std::vector<double> coords;
  std::vector<double> labels;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const double t = ts.time(j);
    if (t + span > ts.t_end() + slack) break;
    for (std::size_t m = 0; m < d; ++m) coords.push_back(ts.at(t + static_cast<double>(m) * p.tau));
    labels.push_back(t);
  }
  return LabeledPointCloud(d, std::move(coords), std::move(labels));
}

/// Indices floor(i*(n-1)/(k-1)), i = 0..k-1: evenly spaced, first and last kept.
inline std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t k) {
  if (k < 2 || k > n) throw DataError("subsample size out of range");
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i * (n - 1) / (k - 1);
  return idx;
}

inline LabeledPointCloud select_points(const LabeledPointCloud& pc, std::span<const std::size_t> idx) {
  std::vector<double> coords;
  std::vector<double> labels;
  coords.reserve(idx.size() * pc.dimension());
  for (std::size_t i : idx) {
    const auto p = pc.point(i);
    coords.insert(coords.end(), p.begin(), p.end());
    labels.push_back(pc.label(i));
  }
  return LabeledPointCloud(pc.dimension(), std::move(coords), std::move(labels));
}

inline LabeledPointCloud subsample(const LabeledPointCloud& pc, std::size_t k) {
  const auto idx = subsample_indices(pc.size(), k);
  return select_points(pc, idx);
}

struct EmbeddingConfig {
  double threshold_fraction = 0.1;
  std::size_t tau_grid_size = 200;
  double tau_max = 0.0;  // <= 0: longest period in the spectrum
};

struct Embedding {
  SpectrumSupport spectrum;
  EmbeddingParams params;
  DelayScan scan;
  LabeledPointCloud cloud;
};

/// Spectrum -> dimension -> delay scan -> sliding window.
inline Embedding embed(const TimeSeries& ts, const EmbeddingConfig& cfg = {}) {
  Embedding e;
  e.spectrum = spectrum(ts, cfg.threshold_fraction);
  e.params.dimension = embedding_dimension(e.spectrum);
  const auto grid = cfg.tau_max > 0.0 ? uniform_delay_grid(cfg.tau_max, cfg.tau_grid_size)
                                      : default_delay_grid(e.spectrum, cfg.tau_grid_size);
  e.scan = scan_delays(e.spectrum, e.params.dimension, grid);
  e.params.tau = e.scan.tau;
  e.cloud = sliding_window(ts, e.params);
  return e;
}

}  // namespace chronocycle
