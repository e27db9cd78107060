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

// AER serialization, spike-to-real decoding and tensor export.
//
// AER stream (all integers little-endian):
//
//   offset  size  field
//   0       4     magic "AER1"
//   4       1     version (1)
//   5       1     number of logical channels (<= 62)
//   6       4     tick length in nanoseconds
//   10      4     spike count (wrap markers excluded)
//   14      2*k   16-bit words: address << 10 | delta_ticks
//
// delta_ticks is the tick distance to the previous word's time (the first
// word counts from tick 0). Address 63 is a wrap marker that advances time by
// 1023 ticks without a spike.
//
// Tensor file:
//
//   0       4     magic "SPKT"
//   4       1     rank
//   5       4*r   dims, uint32
//   ...           row-major float32 payload

#ifndef SPIKECODEC_CODEC_HPP_
#define SPIKECODEC_CODEC_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "spikecodec/core.hpp"

namespace spikecodec {

inline constexpr std::array<char, 4> kAerMagic{'A', 'E', 'R', '1'};
inline constexpr std::uint8_t kAerVersion = 1;
inline constexpr std::size_t kAerHeaderBytes = 14;
inline constexpr std::uint32_t kAerWrapAddress = 63;
inline constexpr std::uint32_t kAerMaxDelta = 1023;
inline constexpr std::uint32_t kAerMaxChannels = 62;
inline constexpr std::uint32_t kDefaultTickNs = 1'000'000;
inline constexpr std::uint32_t kTtfsTickNs = 62'500;

inline constexpr std::array<char, 4> kTensorMagic{'S', 'P', 'K', 'T'};

class ParseError : public Error {
 public:
  enum class Code {
    BadMagic,
    BadVersion,
    BadHeader,
    BadAddress,
    Truncated,
    CountMismatch,
  };

  ParseError(Code code, std::size_t offset, const std::string& what);

  Code code() const { return code_; }
  std::size_t offset() const { return offset_; }

 private:
  Code code_;
  std::size_t offset_;
};

struct AerHeader {
  std::uint8_t version = kAerVersion;
  std::uint8_t num_logical_channels = 0;
  std::uint32_t tick_ns = kDefaultTickNs;
  std::uint32_t event_count = 0;
};

// Times are quantized to ticks with round-half-up.
std::vector<std::uint8_t> to_aer(const SpikeTrainSet& train,
                                 std::uint32_t tick_ns = kDefaultTickNs);

// What the AER stream does not carry.
struct AerLayout {
  std::uint32_t source_channels = 24;
  double frame_rate_hz = 1000.0;
  // Defaults to one past the frame of the last spike.
  std::optional<std::uint32_t> source_frames;
  // Polarity of streams whose channel count equals source_channels. Streams
  // with twice as many channels get On below source_channels, Off above.
  Polarity single_polarity = Polarity::Unipolar;
};

AerHeader read_aer_header(std::span<const std::uint8_t> bytes);
SpikeTrainSet from_aer(std::span<const std::uint8_t> bytes,
                       const AerLayout& layout = {});

// Frame index of an event time; snaps to the nearest frame within 1e-6 of a
// frame, floors otherwise.
std::size_t frame_of(double time_s, double frame_rate_hz);

// Spike counts per (logical channel, frame) smoothed by a causal 5-tap
// moving average of gain 1/5. Events past source_frames are dropped.
TFRepresentation decode_spikes(const SpikeTrainSet& train);

inline constexpr std::size_t kDecoderTaps = 5;

// Spike indicator convolved with the BSA filter, truncated to source_frames.
TFRepresentation decode_bsa(const SpikeTrainSet& train,
                            std::span<const double> filter_taps);

// Staircase reconstruction of a full SOD train: delta * (ON - OFF) so far.
TFRepresentation decode_sod_levels(const SpikeTrainSet& train, double delta);

// Inverts the TTFS latency: a spike at offset r within frame n gives
// y[n] = delta^r.
TFRepresentation decode_ttfs_amplitudes(const SpikeTrainSet& train, double delta);

// Reconstruction of the encoder input when the encoder has a natural
// inverse (SOD full, TTFS, BSA); nullopt otherwise.
std::optional<TFRepresentation> reconstruct(const SpikeTrainSet& train,
                                            const EncoderParams& params);

// Zero rows after the existing channels, zero frames after the existing
// frames. ShapeError if the input exceeds the target.
TFRepresentation pad_for_classifier(const TFRepresentation& tf,
                                    std::size_t target_channels,
                                    std::size_t target_frames);

struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  bool operator==(const Tensor&) const = default;
};

Tensor to_tensor(const TFRepresentation& tf);
// Rank-3 batch; all inputs must share a shape.
Tensor stack_tensors(std::span<const TFRepresentation> batch);

std::vector<std::uint8_t> serialize_tensor(const Tensor& tensor);
Tensor parse_tensor(std::span<const std::uint8_t> bytes);

void export_tensor(const Tensor& tensor, const std::filesystem::path& path);
Tensor import_tensor(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

}  // namespace spikecodec

#endif  // SPIKECODEC_CODEC_HPP_
