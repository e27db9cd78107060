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

#ifndef SPIKECODEC_METRICS_HPP_
#define SPIKECODEC_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "spikecodec/core.hpp"

namespace spikecodec {

// Spikes per source sample: events / (source_channels * source_frames). The
// denominator ignores the ON/OFF split of full SOD trains.
double spike_density(const SpikeTrainSet& train);

// Reported in place of +inf for a perfect reconstruction.
inline constexpr double kSnrCapDb = 300.0;

// 10 log10(sum y^2 / sum (y - y_hat)^2), capped at kSnrCapDb.
double snr_db(const TFRepresentation& original, const TFRepresentation& reconstruction);

enum class BcrBaseline { RawPcm, Mfcc };

inline constexpr double kBitsPerSpike = 16.0;
// 20 kHz PCM at 32 bits per sample.
inline constexpr double kRawPcmBitsPerSecond = 640'000.0;
// 32 coefficients every 5 ms at 32 bits each.
inline constexpr double kMfccBitsPerSecond = 204'800.0;

double bit_compression_ratio(const SpikeTrainSet& train, double duration_s,
                             BcrBaseline baseline);

struct MetricsReport {
  double spike_density = 0.0;
  std::optional<double> snr_db;
  double bcr_raw = 0.0;
  double bcr_mfcc = 0.0;
  EncoderParams encoder;
  Frontend frontend = Frontend::Cochleagram;
  std::size_t num_utterances = 1;
};

MetricsReport measure(const SpikeTrainSet& train, const EncoderParams& encoder,
                      Frontend frontend, double duration_s,
                      std::optional<double> snr = std::nullopt);

// Unweighted mean in index order. SNR is averaged only when every report has
// one. Throws on an empty list or mixed encoder/front-end configurations.
MetricsReport aggregate(std::span<const MetricsReport> reports);

// Flat "key=value" lines.
std::string to_key_value(const MetricsReport& report);

// printf("%.6g"); "nan" for a missing value.
std::string format_g6(std::optional<double> value);

}  // namespace spikecodec

#endif  // SPIKECODEC_METRICS_HPP_
