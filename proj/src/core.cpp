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

#include "spikecodec/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spikecodec {

void validate(const AudioSignal& signal) {
  if (!(signal.sample_rate_hz > 0.0)) {
    throw ParameterError("sample rate must be positive");
  }
  if (signal.samples.empty()) {
    throw ParameterError("audio signal is empty");
  }
}

const char* to_string(Frontend frontend) {
  switch (frontend) {
    case Frontend::Spectrogram: return "spectrogram";
    case Frontend::Cochleagram: return "cochleagram";
  }
  return "unknown";
}

const char* to_string(TFKind kind) {
  switch (kind) {
    case TFKind::Spectrogram: return "spectrogram";
    case TFKind::Cochleagram: return "cochleagram";
    case TFKind::Decoded: return "decoded";
  }
  return "unknown";
}

TFRepresentation::TFRepresentation(std::size_t num_channels,
                                   std::size_t num_frames,
                                   double frame_rate_hz,
                                   std::vector<double> center_freqs_hz,
                                   TFKind kind)
    : num_channels_(num_channels),
      num_frames_(num_frames),
      frame_rate_hz_(frame_rate_hz),
      center_freqs_hz_(std::move(center_freqs_hz)),
      kind_(kind),
      values_(num_channels * num_frames, 0.0) {
  if (!(frame_rate_hz > 0.0)) {
    throw ParameterError("frame rate must be positive");
  }
  if (kind != TFKind::Decoded && center_freqs_hz_.size() != num_channels) {
    throw ShapeError("center frequency count " +
                     std::to_string(center_freqs_hz_.size()) +
                     " does not match channel count " +
                     std::to_string(num_channels));
  }
}

void sort_events(std::vector<SpikeEvent>& events) {
  std::stable_sort(events.begin(), events.end(), event_before);
}

namespace {

struct ParamValidator {
  void operator()(const SodParams& p) const {
    if (!(p.delta > 0.0)) throw ParameterError("SOD threshold must be > 0");
  }
  void operator()(const TtfsParams& p) const {
    if (!(p.delta > 0.0 && p.delta < 1.0)) {
      throw ParameterError("TTFS threshold must lie in (0, 1)");
    }
  }
  void operator()(const LifParams& p) const {
    if (!(p.delta > 0.0)) throw ParameterError("LIF threshold must be > 0");
    for (double tau : p.tau_s) {
      if (!(tau > 0.0)) throw ParameterError("LIF time constants must be > 0");
    }
  }
  void operator()(const BsaParams& p) const {
    if (p.filter_taps.empty()) throw ParameterError("BSA filter is empty");
    if (!(p.threshold >= 0.0)) {
      throw ParameterError("BSA threshold must be >= 0");
    }
  }
};

}  // namespace

void validate(const EncoderParams& params) { std::visit(ParamValidator{}, params); }

std::string encoder_name(const EncoderParams& params) {
  if (const auto* sod = std::get_if<SodParams>(&params)) {
    switch (sod->mode) {
      case SodMode::Full: return "sod";
      case SodMode::OnOnly: return "sod_on";
      case SodMode::OffOnly: return "sod_off";
    }
  }
  if (std::holds_alternative<TtfsParams>(params)) return "ttfs";
  if (std::holds_alternative<LifParams>(params)) return "lif";
  return "bsa";
}

Normalized normalize(const TFRepresentation& tf) {
  double peak = 0.0;
  for (double v : tf.values()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ParameterError("normalize expects finite non-negative values");
    }
    peak = std::max(peak, v);
  }
  Normalized out{tf, peak == 0.0};
  if (out.silent) return out;
  for (double& v : out.tf.values()) v /= peak;
  return out;
}

std::vector<Violation> validate_spike_train(const SpikeTrainSet& train) {
  constexpr auto kSetLevel = std::numeric_limits<std::size_t>::max();
  std::vector<Violation> out;
  const std::uint32_t logical = train.num_logical_channels;
  if (logical == 0 ||
      (train.source_channels != 0 && logical != train.source_channels &&
       logical != 2 * train.source_channels)) {
    out.push_back({ViolationKind::BadChannelCount, kSetLevel,
                   "logical channel count " + std::to_string(logical) +
                       " is neither the source channel count nor twice it"});
  }
  // Times computed as (n + 1) * T and N / f_s may differ in the last ulp.
  const double duration = train.duration_s();
  const double slack = 1e-9;
  for (std::size_t i = 0; i < train.events.size(); ++i) {
    const SpikeEvent& e = train.events[i];
    if (e.channel >= logical) {
      out.push_back({ViolationKind::ChannelOutOfRange, i,
                     "channel out of range: " + std::to_string(e.channel) +
                         " >= " + std::to_string(logical)});
    }
    if (!(e.time_s >= 0.0)) {
      out.push_back({ViolationKind::NegativeTime, i, "negative spike time"});
    } else if (train.source_frames != 0 && e.time_s > duration + slack) {
      out.push_back({ViolationKind::TimeBeyondDuration, i,
                     "spike time beyond train duration"});
    }
    if (i > 0 && event_before(e, train.events[i - 1])) {
      out.push_back({ViolationKind::NotSorted, i, "not sorted"});
    }
  }
  return out;
}

}  // namespace spikecodec
