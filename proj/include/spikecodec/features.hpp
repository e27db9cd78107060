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

// Time-frequency front-ends. Both end at num_channels x frames sampled at
// 1 kHz for 20 kHz input.

#ifndef SPIKECODEC_FEATURES_HPP_
#define SPIKECODEC_FEATURES_HPP_

#include <cstddef>
#include <vector>

#include "spikecodec/core.hpp"

namespace spikecodec {

struct SpectrogramConfig {
  double window_ms = 5.0;
  double hop_ms = 0.5;
  double tukey_alpha = 0.25;
  std::size_t num_bins_kept = 24;
  std::size_t post_downsample = 2;

  void validate() const;
};

struct CochleagramConfig {
  std::size_t num_filters = 24;
  double fmin_hz = 100.0;
  double fmax_hz = 4500.0;
  int filter_order = 4;
  std::size_t env_downsample = 10;
  double lateral_alpha = 0.25;
  std::size_t post_downsample = 2;

  void validate() const;
};

// Magnitude STFT with a symmetric Tukey window, DFT length equal to the
// window length. Keeps bins 0..num_bins_kept-1 and every post_downsample-th
// frame starting at frame 0.
TFRepresentation spectrogram(const AudioSignal& signal,
                             const SpectrogramConfig& cfg = {});

// Gammatone filterbank -> Hilbert envelope -> decimation -> square root ->
// lateral inhibition -> half-wave rectification -> frame decimation.
TFRepresentation cochleagram(const AudioSignal& signal,
                             const CochleagramConfig& cfg = {});

// Front-end with default configuration followed by normalize().
Normalized extract(const AudioSignal& signal, Frontend frontend);

// Symmetric Tukey (tapered cosine) window; alpha 0 is rectangular, 1 is Hann.
std::vector<double> tukey_window(std::size_t length, double alpha);

// Glasberg & Moore equivalent rectangular bandwidth in Hz.
double erb_bandwidth_hz(double freq_hz);

// `count` frequencies equally spaced on the ERB-rate scale, endpoints
// included, ascending.
std::vector<double> erb_space(double fmin_hz, double fmax_hz, std::size_t count);

// Envelope |x + j H{x}| of a real signal (FFT-based analytic signal).
std::vector<double> analytic_envelope(const std::vector<double>& x);

}  // namespace spikecodec

#endif  // SPIKECODEC_FEATURES_HPP_
