/* Copyright 2026 The spikecodec Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "spikecodec/features.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>

namespace spikecodec {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t samples_for_ms(double ms, double rate_hz) {
  return static_cast<std::size_t>(std::lround(ms * rate_hz / 1000.0));
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

struct FftwPlan {
  fftw_plan plan = nullptr;
  FftwPlan(int n, fftw_complex* buf, int sign) {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
  }
  ~FftwPlan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
};

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Ratio between ERB and the gammatone bandwidth parameter for a given order
// (1.019 for order 4).
double gammatone_bandwidth_scale(int order) {
  const double num = kPi * factorial(2 * order - 2) *
                     std::pow(2.0, -(2.0 * order - 2.0));
  const double den = std::pow(factorial(order - 1), 2.0);
  return den / num;
}

// Complex-shift cascade: demodulate to baseband, `order` identical one-pole
// low-passes, remodulate. Unit gain at the center frequency.
std::vector<double> gammatone_filter(const std::vector<double>& x,
                                     double center_hz, double rate_hz,
                                     int order) {
  const double bandwidth = gammatone_bandwidth_scale(order) *
                           erb_bandwidth_hz(center_hz);
  const double coeff = 1.0 - std::exp(-2.0 * kPi * bandwidth / rate_hz);
  const double omega = 2.0 * kPi * center_hz / rate_hz;
  std::vector<std::complex<double>> state(static_cast<std::size_t>(order));
  std::vector<double> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    const std::complex<double> phasor = std::polar(1.0, omega * n);
    std::complex<double> z = x[n] * std::conj(phasor);
    for (auto& s : state) {
      s += coeff * (z - s);
      z = s;
    }
    y[n] = 2.0 * std::real(z * phasor);
  }
  return y;
}

// Hamming-windowed sinc low-pass at half the decimated Nyquist rate,
// unit DC gain.
std::vector<double> decimation_filter(std::size_t factor) {
  const std::size_t length = 8 * factor + 1;
  const double center = static_cast<double>(length - 1) / 2.0;
  const double cutoff = 0.5 / static_cast<double>(factor);
  std::vector<double> h(length);
  double sum = 0.0;
  for (std::size_t k = 0; k < length; ++k) {
    const double t = static_cast<double>(k) - center;
    const double sinc = t == 0.0 ? 2.0 * cutoff
                                 : std::sin(2.0 * kPi * cutoff * t) / (kPi * t);
    const double w = 0.54 - 0.46 * std::cos(2.0 * kPi * k / (length - 1));
    h[k] = sinc * w;
    sum += h[k];
  }
  for (double& v : h) v /= sum;
  return h;
}

// Zero-phase FIR evaluated only at every factor-th sample.
std::vector<double> decimate(const std::vector<double>& x,
                             const std::vector<double>& h,
                             std::size_t factor) {
  const std::size_t out_len = ceil_div(x.size(), factor);
  const auto half = static_cast<std::ptrdiff_t>(h.size() / 2);
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<double> y(out_len);
  for (std::size_t m = 0; m < out_len; ++m) {
    const auto center = static_cast<std::ptrdiff_t>(m * factor);
    double acc = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      const std::ptrdiff_t idx = center + static_cast<std::ptrdiff_t>(k) - half;
      if (idx >= 0 && idx < n) acc += h[k] * x[static_cast<std::size_t>(idx)];
    }
    y[m] = acc;
  }
  return y;
}

}  // namespace

void SpectrogramConfig::validate() const {
  if (!(hop_ms > 0.0 && window_ms > hop_ms)) {
    throw ParameterError("spectrogram requires window_ms > hop_ms > 0");
  }
  if (!(tukey_alpha >= 0.0 && tukey_alpha <= 1.0)) {
    throw ParameterError("tukey_alpha must lie in [0, 1]");
  }
  if (num_bins_kept < 1) throw ParameterError("num_bins_kept must be >= 1");
  if (post_downsample < 1) throw ParameterError("post_downsample must be >= 1");
}

void CochleagramConfig::validate() const {
  if (!(fmin_hz > 0.0 && fmin_hz < fmax_hz)) {
    throw ParameterError("cochleagram requires 0 < fmin_hz < fmax_hz");
  }
  if (num_filters < 2) throw ParameterError("num_filters must be >= 2");
  if (filter_order < 1) throw ParameterError("filter_order must be >= 1");
  if (env_downsample < 1 || post_downsample < 1) {
    throw ParameterError("downsampling factors must be >= 1");
  }
}

std::vector<double> tukey_window(std::size_t length, double alpha) {
  std::vector<double> w(length, 1.0);
  if (length <= 1 || alpha <= 0.0) return w;
  const double edge = alpha / 2.0;
  for (std::size_t n = 0; n < length; ++n) {
    const double x = static_cast<double>(n) / static_cast<double>(length - 1);
    if (x < edge) {
      w[n] = 0.5 * (1.0 + std::cos(2.0 * kPi / alpha * (x - edge)));
    } else if (x > 1.0 - edge) {
      w[n] = 0.5 * (1.0 + std::cos(2.0 * kPi / alpha * (x - 1.0 + edge)));
    }
  }
  return w;
}

double erb_bandwidth_hz(double freq_hz) { return 24.7 * (4.37e-3 * freq_hz + 1.0); }

std::vector<double> erb_space(double fmin_hz, double fmax_hz, std::size_t count) {
  auto to_rate = [](double f) { return 21.4 * std::log10(1.0 + 4.37e-3 * f); };
  auto to_hz = [](double e) { return (std::pow(10.0, e / 21.4) - 1.0) / 4.37e-3; };
  std::vector<double> out(count);
  if (count == 0) return out;
  if (count == 1) {
    out[0] = fmin_hz;
    return out;
  }
  const double lo = to_rate(fmin_hz);
  const double hi = to_rate(fmax_hz);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = to_hz(lo + (hi - lo) * static_cast<double>(i) /
                            static_cast<double>(count - 1));
  }
  out.front() = fmin_hz;
  out.back() = fmax_hz;
  return out;
}

std::vector<double> analytic_envelope(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  std::unique_ptr<fftw_complex, FftwFree> buf(fftw_alloc_complex(n));
  const FftwPlan forward(static_cast<int>(n), buf.get(), FFTW_FORWARD);
  const FftwPlan backward(static_cast<int>(n), buf.get(), FFTW_BACKWARD);
  fftw_complex* data = buf.get();
  for (std::size_t i = 0; i < n; ++i) {
    data[i][0] = x[i];
    data[i][1] = 0.0;
  }
  fftw_execute(forward.plan);
  // Keep DC (and Nyquist for even n), double positive frequencies, zero the
  // negative ones.
  const std::size_t positive_end = (n + 1) / 2;
  for (std::size_t k = 1; k < positive_end; ++k) {
    data[k][0] *= 2.0;
    data[k][1] *= 2.0;
  }
  for (std::size_t k = n / 2 + 1; k < n; ++k) {
    data[k][0] = 0.0;
    data[k][1] = 0.0;
  }
  fftw_execute(backward.plan);
  std::vector<double> env(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    env[i] = std::hypot(data[i][0], data[i][1]) * scale;
  }
  return env;
}

TFRepresentation spectrogram(const AudioSignal& signal,
                             const SpectrogramConfig& cfg) {
  validate(signal);
  cfg.validate();
  const double fs = signal.sample_rate_hz;
  const std::size_t win = samples_for_ms(cfg.window_ms, fs);
  const std::size_t hop = samples_for_ms(cfg.hop_ms, fs);
  if (hop == 0 || win <= hop) {
    throw ParameterError("window/hop shorter than one sample at this rate");
  }
  if (cfg.num_bins_kept > win / 2 + 1) {
    throw ParameterError("num_bins_kept exceeds the number of non-negative bins");
  }
  const std::size_t n = signal.samples.size();
  if (n < win) throw ParameterError("signal too short");

  const std::size_t raw_frames = (n - win) / hop + 1;
  const std::size_t frames = ceil_div(raw_frames, cfg.post_downsample);
  const std::size_t bins = cfg.num_bins_kept;

  const std::vector<double> window = tukey_window(win, cfg.tukey_alpha);
  std::vector<double> cos_table(win), sin_table(win);
  for (std::size_t i = 0; i < win; ++i) {
    const double angle = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(win);
    cos_table[i] = std::cos(angle);
    sin_table[i] = std::sin(angle);
  }

  std::vector<double> freqs(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    freqs[k] = static_cast<double>(k) * fs / static_cast<double>(win);
  }
  TFRepresentation out(bins, frames, fs / static_cast<double>(hop * cfg.post_downsample),
                       std::move(freqs), TFKind::Spectrogram);

  std::vector<double> segment(win);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * cfg.post_downsample * hop;
    for (std::size_t i = 0; i < win; ++i) {
      segment[i] = signal.samples[start + i] * window[i];
    }
    for (std::size_t k = 0; k < bins; ++k) {
      double re = 0.0;
      double im = 0.0;
      for (std::size_t i = 0; i < win; ++i) {
        const std::size_t idx = (k * i) % win;
        re += segment[i] * cos_table[idx];
        im -= segment[i] * sin_table[idx];
      }
      out.at(k, f) = std::hypot(re, im);
    }
  }
  return out;
}

TFRepresentation cochleagram(const AudioSignal& signal,
                             const CochleagramConfig& cfg) {
  validate(signal);
  cfg.validate();
  const double fs = signal.sample_rate_hz;
  if (cfg.fmax_hz >= fs / 2.0) {
    throw ParameterError("fmax_hz must be below the Nyquist frequency");
  }
  const std::size_t n = signal.samples.size();
  const auto min_len = static_cast<std::size_t>(std::ceil(0.010 * fs));
  if (n < min_len) throw ParameterError("signal too short");

  const std::size_t channels = cfg.num_filters;
  const std::vector<double> centers = erb_space(cfg.fmin_hz, cfg.fmax_hz, channels);
  const std::vector<double> lowpass = decimation_filter(cfg.env_downsample);
  const std::size_t env_frames = ceil_div(n, cfg.env_downsample);

  // channels x env_frames, compressed envelopes.
  std::vector<std::vector<double>> env(channels);
  for (std::size_t c = 0; c < channels; ++c) {
    const std::vector<double> band =
        gammatone_filter(signal.samples, centers[c], fs, cfg.filter_order);
    env[c] = decimate(analytic_envelope(band), lowpass, cfg.env_downsample);
    // The decimation filter's side lobes can dip slightly below zero.
    for (double& v : env[c]) v = std::sqrt(std::max(0.0, v));
  }

  const std::size_t frames = ceil_div(env_frames, cfg.post_downsample);
  TFRepresentation out(
      channels, frames,
      fs / static_cast<double>(cfg.env_downsample * cfg.post_downsample),
      centers, TFKind::Cochleagram);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t src = f * cfg.post_downsample;
    for (std::size_t c = 0; c < channels; ++c) {
      const double below = env[c == 0 ? 0 : c - 1][src];
      const double above = env[c + 1 == channels ? c : c + 1][src];
      const double v = env[c][src] - cfg.lateral_alpha * (below + above);
      out.at(c, f) = std::max(0.0, v);
    }
  }
  return out;
}

Normalized extract(const AudioSignal& signal, Frontend frontend) {
  switch (frontend) {
    case Frontend::Spectrogram: return normalize(spectrogram(signal));
    case Frontend::Cochleagram: return normalize(cochleagram(signal));
  }
  throw ParameterError("unknown front-end");
}

}  // namespace spikecodec
