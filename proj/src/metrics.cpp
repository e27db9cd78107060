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

#include "spikecodec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace spikecodec {

double spike_density(const SpikeTrainSet& train) {
  if (train.source_frames == 0 || train.source_channels == 0) {
    throw Error("spike density needs non-zero source dimensions");
  }
  const double samples = static_cast<double>(train.source_channels) *
                         static_cast<double>(train.source_frames);
  return static_cast<double>(train.events.size()) / samples;
}

double snr_db(const TFRepresentation& original, const TFRepresentation& reconstruction) {
  if (original.num_channels() != reconstruction.num_channels() ||
      original.num_frames() != reconstruction.num_frames()) {
    throw ShapeError("SNR needs equal shapes");
  }
  const auto y = original.values();
  const auto y_hat = reconstruction.values();
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double e = y[i] - y_hat[i];
    signal += y[i] * y[i];
    noise += e * e;
  }
  if (signal == 0.0) throw Error("SNR undefined for a zero-energy original");
  if (noise == 0.0) return kSnrCapDb;
  return std::min(kSnrCapDb, 10.0 * std::log10(signal / noise));
}

double bit_compression_ratio(const SpikeTrainSet& train, double duration_s,
                             BcrBaseline baseline) {
  if (!(duration_s > 0.0)) throw ParameterError("duration must be positive");
  const double encoded = kBitsPerSpike * static_cast<double>(train.events.size());
  const double rate =
      baseline == BcrBaseline::RawPcm ? kRawPcmBitsPerSecond : kMfccBitsPerSecond;
  return encoded / (rate * duration_s);
}

MetricsReport measure(const SpikeTrainSet& train, const EncoderParams& encoder,
                      Frontend frontend, double duration_s, std::optional<double> snr) {
  MetricsReport r;
  r.spike_density = spike_density(train);
  r.snr_db = snr;
  r.bcr_raw = bit_compression_ratio(train, duration_s, BcrBaseline::RawPcm);
  r.bcr_mfcc = bit_compression_ratio(train, duration_s, BcrBaseline::Mfcc);
  r.encoder = encoder;
  r.frontend = frontend;
  r.num_utterances = 1;
  return r;
}

MetricsReport aggregate(std::span<const MetricsReport> reports) {
  if (reports.empty()) throw Error("nothing to aggregate");
  const MetricsReport& first = reports.front();
  double density = 0.0;
  double bcr_raw = 0.0;
  double bcr_mfcc = 0.0;
  double snr = 0.0;
  bool all_snr = true;
  std::size_t utterances = 0;
  for (const MetricsReport& r : reports) {
    if (r.frontend != first.frontend || !(r.encoder == first.encoder)) {
      throw Error("cannot aggregate reports from different configurations");
    }
    density += r.spike_density;
    bcr_raw += r.bcr_raw;
    bcr_mfcc += r.bcr_mfcc;
    if (r.snr_db) {
      snr += *r.snr_db;
    } else {
      all_snr = false;
    }
    utterances += r.num_utterances;
  }
  const auto n = static_cast<double>(reports.size());
  MetricsReport out = first;
  out.spike_density = density / n;
  out.bcr_raw = bcr_raw / n;
  out.bcr_mfcc = bcr_mfcc / n;
  out.snr_db = all_snr ? std::optional<double>(snr / n) : std::nullopt;
  out.num_utterances = utterances;
  return out;
}

std::string format_g6(std::optional<double> value) {
  if (!value || std::isnan(*value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *value);
  return buf;
}

namespace {

std::optional<double> primary_threshold(const EncoderParams& params) {
  if (const auto* p = std::get_if<SodParams>(&params)) return p->delta;
  if (const auto* p = std::get_if<TtfsParams>(&params)) return p->delta;
  if (const auto* p = std::get_if<LifParams>(&params)) return p->delta;
  return std::get<BsaParams>(params).threshold;
}

}  // namespace

std::string to_key_value(const MetricsReport& report) {
  std::ostringstream out;
  out << "encoder=" << encoder_name(report.encoder) << '\n'
      << "threshold=" << format_g6(primary_threshold(report.encoder)) << '\n'
      << "frontend=" << to_string(report.frontend) << '\n'
      << "num_utterances=" << report.num_utterances << '\n'
      << "spike_density=" << format_g6(report.spike_density) << '\n'
      << "snr_db=" << format_g6(report.snr_db) << '\n'
      << "bcr_raw=" << format_g6(report.bcr_raw) << '\n'
      << "bcr_mfcc=" << format_g6(report.bcr_mfcc) << '\n';
  return out.str();
}

}  // namespace spikecodec
