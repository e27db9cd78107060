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

// Shared domain types: audio buffers, time-frequency matrices, spike trains
// and encoder parameter sets. Everything here is a plain value type.

#ifndef SPIKECODEC_CORE_HPP_
#define SPIKECODEC_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace spikecodec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid encoder / front-end parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Dimension mismatch between two matrices or a matrix and a target shape.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

struct AudioSignal {
  std::vector<double> samples;
  double sample_rate_hz = 20000.0;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// Throws ParameterError unless sample_rate_hz > 0 and samples is non-empty.
void validate(const AudioSignal& signal);

enum class Frontend { Spectrogram, Cochleagram };
enum class TFKind { Spectrogram, Cochleagram, Decoded };

const char* to_string(Frontend frontend);
const char* to_string(TFKind kind);

// Channels x frames real matrix, stored row-major (one row per channel).
class TFRepresentation {
 public:
  TFRepresentation() = default;
  TFRepresentation(std::size_t num_channels, std::size_t num_frames,
                   double frame_rate_hz, std::vector<double> center_freqs_hz,
                   TFKind kind);

  std::size_t num_channels() const { return num_channels_; }
  std::size_t num_frames() const { return num_frames_; }
  double frame_rate_hz() const { return frame_rate_hz_; }
  const std::vector<double>& center_freqs_hz() const { return center_freqs_hz_; }
  TFKind kind() const { return kind_; }

  double& at(std::size_t channel, std::size_t frame) {
    return values_[channel * num_frames_ + frame];
  }
  double at(std::size_t channel, std::size_t frame) const {
    return values_[channel * num_frames_ + frame];
  }

  std::span<double> channel(std::size_t c) {
    return {values_.data() + c * num_frames_, num_frames_};
  }
  std::span<const double> channel(std::size_t c) const {
    return {values_.data() + c * num_frames_, num_frames_};
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool operator==(const TFRepresentation&) const = default;

 private:
  std::size_t num_channels_ = 0;
  std::size_t num_frames_ = 0;
  double frame_rate_hz_ = 1000.0;
  std::vector<double> center_freqs_hz_;
  TFKind kind_ = TFKind::Decoded;
  std::vector<double> values_;
};

enum class Polarity : std::uint8_t { On, Off, Unipolar };

struct SpikeEvent {
  std::uint32_t channel = 0;
  Polarity polarity = Polarity::Unipolar;
  double time_s = 0.0;

  bool operator==(const SpikeEvent&) const = default;
};

// Strict weak order on (time, channel).
inline bool event_before(const SpikeEvent& a, const SpikeEvent& b) {
  if (a.time_s != b.time_s) return a.time_s < b.time_s;
  return a.channel < b.channel;
}

// Stable sort by (time, channel).
void sort_events(std::vector<SpikeEvent>& events);

struct SpikeTrainSet {
  std::vector<SpikeEvent> events;
  std::uint32_t num_logical_channels = 0;
  // Dimensions of the representation the train was encoded from; the spike
  // density denominator.
  std::uint32_t source_channels = 0;
  std::uint32_t source_frames = 0;
  double frame_rate_hz = 1000.0;

  double duration_s() const { return source_frames / frame_rate_hz; }

  bool operator==(const SpikeTrainSet&) const = default;
};

enum class SodMode { Full, OnOnly, OffOnly };

struct SodParams {
  double delta = 0.1;
  SodMode mode = SodMode::Full;
  bool operator==(const SodParams&) const = default;
};

struct TtfsParams {
  double delta = 0.1;
  bool operator==(const TtfsParams&) const = default;
};

struct LifParams {
  double delta = 0.1;
  std::vector<double> tau_s;  // one per source channel
  bool operator==(const LifParams&) const = default;
};

struct BsaParams {
  std::vector<double> filter_taps;
  double threshold = 0.0;
  bool operator==(const BsaParams&) const = default;
};

using EncoderParams = std::variant<SodParams, TtfsParams, LifParams, BsaParams>;

// Throws ParameterError if any threshold / time constant / filter is invalid.
void validate(const EncoderParams& params);

// Short encoder name: "sod", "sod_on", "sod_off", "ttfs", "lif" or "bsa".
std::string encoder_name(const EncoderParams& params);

struct Normalized {
  TFRepresentation tf;
  // All-zero input; the output is all-zero as well.
  bool silent = false;
};

// Divides every value by the global maximum over all channels and frames.
// Input must be finite and non-negative (ParameterError otherwise).
Normalized normalize(const TFRepresentation& tf);

enum class ViolationKind {
  NotSorted,
  ChannelOutOfRange,
  NegativeTime,
  TimeBeyondDuration,
  BadChannelCount,
};

struct Violation {
  ViolationKind kind;
  std::size_t event_index;  // SIZE_MAX for set-level violations
  std::string message;
};

// Reports every invariant violation in `train`; empty means valid.
std::vector<Violation> validate_spike_train(const SpikeTrainSet& train);

}  // namespace spikecodec

#endif  // SPIKECODEC_CORE_HPP_
