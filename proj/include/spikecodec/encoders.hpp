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

// Spike encoders operating channel by channel on a normalized
// TFRepresentation. Event time of frame n is n / frame_rate_hz.

#ifndef SPIKECODEC_ENCODERS_HPP_
#define SPIKECODEC_ENCODERS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spikecodec/core.hpp"

namespace spikecodec {

// Send-on-delta. A spike fires when the sample differs from the sample at the
// previous spike (initially frame 0) by at least delta; upward changes are ON,
// downward OFF. Full mode places OFF trains at address channel + C.
SpikeTrainSet encode_sod(const TFRepresentation& tf, double delta, SodMode mode);

// Time to first spike: each sample y >= delta fires once at
// (n + log(y) / log(delta)) / frame_rate. Requires 0 < delta < 1.
SpikeTrainSet encode_ttfs(const TFRepresentation& tf, double delta);

// Per-channel membrane time constants, linear in 1 / f between tau_max at
// the lowest positive center frequency and tau_min at the highest.
struct LifTauMap {
  double tau_min_s = 0.020;
  double tau_max_s = 0.040;

  void validate() const;
  // Channels at f <= 0 get tau_max_s.
  std::vector<double> taus_for(std::span<const double> center_freqs_hz) const;
};

// Forward-Euler leaky integrate-and-fire, dt = 1 / frame_rate, reset to zero.
// The potential at frame k integrates inputs 0..k-1; a spike is emitted at
// frame k when it reaches delta.
SpikeTrainSet encode_lif(const TFRepresentation& tf, double delta,
                         std::span<const double> tau_s);
SpikeTrainSet encode_lif(const TFRepresentation& tf, double delta,
                         const LifTauMap& taus);

// Ben's spiker algorithm, two-error form: spike at t when
//   sum_k |r[t+k] - h[k]| <= sum_k |r[t+k]| - threshold
// then subtract h from the residual r.
SpikeTrainSet encode_bsa(const TFRepresentation& tf,
                         std::span<const double> filter_taps, double threshold);

SpikeTrainSet encode(const TFRepresentation& tf, const EncoderParams& params);

// Unit-sum windowed-sinc low-pass (raised-cosine window that is non-zero at
// both ends) for BSA.
std::vector<double> bsa_lowpass_taps(double cutoff_hz, std::size_t length,
                                     double sample_rate_hz);

struct BsaGrid {
  std::vector<double> cutoff_hz_candidates;
  std::vector<std::size_t> filter_len_candidates;
  std::vector<double> threshold_candidates;
  double subset_fraction = 0.10;

  void validate() const;
};

struct BsaChoice {
  double cutoff_hz = 0.0;
  std::size_t filter_len = 0;
  double threshold = 0.0;
  std::vector<double> filter_taps;
  double snr_db = 0.0;
  std::vector<std::size_t> subset;  // indices of the scored utterances
};

// ceil(fraction * count) distinct indices (at least one), drawn with a
// seeded mt19937_64 partial Fisher-Yates shuffle, returned ascending.
std::vector<std::size_t> draw_subset(std::size_t count, double fraction,
                                     std::uint64_t seed);

// Grid search maximizing the mean reconstruction SNR of encode_bsa +
// decode_bsa over a seeded subset of `training`. Silent utterances in the
// subset are skipped. Ties keep the earliest point in cutoff-major, then
// length, then threshold order.
BsaChoice optimize_bsa(std::span<const TFRepresentation> training,
                       const BsaGrid& grid, std::uint64_t seed);

}  // namespace spikecodec

#endif  // SPIKECODEC_ENCODERS_HPP_
