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

#include "spikecodec/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>

namespace spikecodec {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t pos) {
  return static_cast<std::uint16_t>(b[pos] | (b[pos + 1] << 8));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[pos + i]) << (8 * i);
  return v;
}

std::uint16_t aer_word(std::uint32_t address, std::uint32_t delta) {
  return static_cast<std::uint16_t>((address << 10) | delta);
}

std::uint64_t to_ticks(double time_s, std::uint32_t tick_ns) {
  const double ticks = std::floor(time_s * 1e9 / static_cast<double>(tick_ns) + 0.5);
  return static_cast<std::uint64_t>(std::max(0.0, ticks));
}

TFRepresentation decoded_matrix(const SpikeTrainSet& train, std::size_t channels) {
  return TFRepresentation(channels, train.source_frames, train.frame_rate_hz, {},
                          TFKind::Decoded);
}

std::string offset_text(std::size_t offset) {
  return " at byte offset " + std::to_string(offset);
}

}  // namespace

ParseError::ParseError(Code code, std::size_t offset, const std::string& what)
    : Error(what + offset_text(offset)), code_(code), offset_(offset) {}

std::vector<std::uint8_t> to_aer(const SpikeTrainSet& train, std::uint32_t tick_ns) {
  if (tick_ns == 0) throw ParameterError("tick length must be positive");
  if (train.num_logical_channels > kAerMaxChannels) {
    throw Error("address space exceeded: " +
                std::to_string(train.num_logical_channels) + " logical channels");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kAerHeaderBytes + 2 * train.events.size());
  out.insert(out.end(), kAerMagic.begin(), kAerMagic.end());
  out.push_back(kAerVersion);
  out.push_back(static_cast<std::uint8_t>(train.num_logical_channels));
  put_u32(out, tick_ns);
  put_u32(out, static_cast<std::uint32_t>(train.events.size()));

  std::uint64_t previous = 0;
  const SpikeEvent* last = nullptr;
  for (const SpikeEvent& e : train.events) {
    if (e.channel >= kAerWrapAddress) {
      throw Error("address space exceeded: channel " + std::to_string(e.channel));
    }
    if (last != nullptr && event_before(e, *last)) {
      throw Error("spike events are not sorted by (time, channel)");
    }
    if (!(e.time_s >= 0.0)) throw Error("negative spike time");
    last = &e;
    const std::uint64_t tick = to_ticks(e.time_s, tick_ns);
    std::uint64_t delta = tick - previous;
    while (delta > kAerMaxDelta) {
      put_u16(out, aer_word(kAerWrapAddress, kAerMaxDelta));
      delta -= kAerMaxDelta;
    }
    put_u16(out, aer_word(e.channel, static_cast<std::uint32_t>(delta)));
    previous = tick;
  }
  return out;
}

AerHeader read_aer_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kAerHeaderBytes) {
    throw ParseError(ParseError::Code::Truncated, bytes.size(), "truncated AER header");
  }
  if (!std::equal(kAerMagic.begin(), kAerMagic.end(), bytes.begin(),
                  [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; })) {
    throw ParseError(ParseError::Code::BadMagic, 0, "bad AER magic");
  }
  AerHeader h;
  h.version = bytes[4];
  if (h.version != kAerVersion) {
    throw ParseError(ParseError::Code::BadVersion, 4,
                     "unsupported AER version " + std::to_string(h.version));
  }
  h.num_logical_channels = bytes[5];
  if (h.num_logical_channels > kAerMaxChannels) {
    throw ParseError(ParseError::Code::BadHeader, 5, "channel count exceeds 62");
  }
  h.tick_ns = get_u32(bytes, 6);
  if (h.tick_ns == 0) throw ParseError(ParseError::Code::BadHeader, 6, "zero tick length");
  h.event_count = get_u32(bytes, 10);
  return h;
}

SpikeTrainSet from_aer(std::span<const std::uint8_t> bytes, const AerLayout& layout) {
  const AerHeader header = read_aer_header(bytes);
  SpikeTrainSet train;
  train.num_logical_channels = header.num_logical_channels;
  train.source_channels = layout.source_channels;
  train.frame_rate_hz = layout.frame_rate_hz;
  train.events.reserve(header.event_count);
  const bool split = header.num_logical_channels == 2 * layout.source_channels;

  std::size_t pos = kAerHeaderBytes;
  std::uint64_t tick = 0;
  while (train.events.size() < header.event_count) {
    if (pos + 2 > bytes.size()) {
      throw ParseError(ParseError::Code::Truncated, pos,
                       "truncated AER payload after " +
                           std::to_string(train.events.size()) + " of " +
                           std::to_string(header.event_count) + " events");
    }
    const std::uint16_t word = get_u16(bytes, pos);
    const std::uint32_t address = word >> 10;
    tick += word & kAerMaxDelta;
    if (address != kAerWrapAddress) {
      if (address >= header.num_logical_channels) {
        throw ParseError(ParseError::Code::BadAddress, pos,
                         "address " + std::to_string(address) + " out of range");
      }
      Polarity polarity = layout.single_polarity;
      if (split) polarity = address < layout.source_channels ? Polarity::On : Polarity::Off;
      const double time =
          static_cast<double>(tick * header.tick_ns) / 1e9;
      train.events.push_back({address, polarity, time});
    }
    pos += 2;
  }
  if (pos != bytes.size()) {
    throw ParseError(ParseError::Code::CountMismatch, pos,
                     "payload continues past the declared " +
                         std::to_string(header.event_count) + " events");
  }
  if (layout.source_frames) {
    train.source_frames = *layout.source_frames;
  } else if (!train.events.empty()) {
    train.source_frames = static_cast<std::uint32_t>(
        frame_of(train.events.back().time_s, train.frame_rate_hz) + 1);
  }
  return train;
}

std::size_t frame_of(double time_s, double frame_rate_hz) {
  const double x = time_s * frame_rate_hz;
  if (!(x > 0.0)) return 0;
  const double nearest = std::nearbyint(x);
  const double f = std::abs(x - nearest) <= 1e-6 ? nearest : std::floor(x);
  return static_cast<std::size_t>(f);
}

TFRepresentation decode_spikes(const SpikeTrainSet& train) {
  const std::size_t channels = train.num_logical_channels;
  const std::size_t frames = train.source_frames;
  std::vector<std::uint32_t> counts(channels * frames, 0);
  for (const SpikeEvent& e : train.events) {
    const std::size_t f = frame_of(e.time_s, train.frame_rate_hz);
    if (e.channel < channels && f < frames) ++counts[e.channel * frames + f];
  }
  TFRepresentation out = decoded_matrix(train, channels);
  constexpr double kGain = 1.0 / static_cast<double>(kDecoderTaps);
  for (std::size_t c = 0; c < channels; ++c) {
    const std::uint32_t* row = counts.data() + c * frames;
    std::uint32_t window = 0;
    for (std::size_t n = 0; n < frames; ++n) {
      window += row[n];
      if (n >= kDecoderTaps) window -= row[n - kDecoderTaps];
      out.at(c, n) = static_cast<double>(window) * kGain;
    }
  }
  return out;
}

TFRepresentation decode_bsa(const SpikeTrainSet& train,
                            std::span<const double> filter_taps) {
  const std::size_t channels = train.num_logical_channels;
  const std::size_t frames = train.source_frames;
  TFRepresentation out = decoded_matrix(train, channels);
  for (const SpikeEvent& e : train.events) {
    const std::size_t f = frame_of(e.time_s, train.frame_rate_hz);
    if (e.channel >= channels) continue;
    for (std::size_t k = 0; k < filter_taps.size() && f + k < frames; ++k) {
      out.at(e.channel, f + k) += filter_taps[k];
    }
  }
  return out;
}

TFRepresentation decode_sod_levels(const SpikeTrainSet& train, double delta) {
  const std::size_t channels = train.source_channels;
  if (train.num_logical_channels != 2 * channels) {
    throw ShapeError("SOD level decoding needs a full ON/OFF train");
  }
  const std::size_t frames = train.source_frames;
  std::vector<int> steps(channels * frames, 0);
  for (const SpikeEvent& e : train.events) {
    const std::size_t f = frame_of(e.time_s, train.frame_rate_hz);
    if (f >= frames) continue;
    if (e.channel < channels) {
      ++steps[e.channel * frames + f];
    } else {
      --steps[(e.channel - channels) * frames + f];
    }
  }
  TFRepresentation out = decoded_matrix(train, channels);
  for (std::size_t c = 0; c < channels; ++c) {
    long level = 0;
    for (std::size_t n = 0; n < frames; ++n) {
      level += steps[c * frames + n];
      out.at(c, n) = delta * static_cast<double>(level);
    }
  }
  return out;
}

TFRepresentation decode_ttfs_amplitudes(const SpikeTrainSet& train, double delta) {
  const std::size_t channels = train.num_logical_channels;
  const std::size_t frames = train.source_frames;
  TFRepresentation out = decoded_matrix(train, channels);
  for (const SpikeEvent& e : train.events) {
    const std::size_t f = frame_of(e.time_s, train.frame_rate_hz);
    if (e.channel >= channels || f >= frames) continue;
    const double offset = std::clamp(
        e.time_s * train.frame_rate_hz - static_cast<double>(f), 0.0, 1.0);
    double& slot = out.at(e.channel, f);
    slot = std::max(slot, std::pow(delta, offset));
  }
  return out;
}

std::optional<TFRepresentation> reconstruct(const SpikeTrainSet& train,
                                            const EncoderParams& params) {
  if (const auto* p = std::get_if<SodParams>(&params)) {
    if (p->mode != SodMode::Full) return std::nullopt;
    return decode_sod_levels(train, p->delta);
  }
  if (const auto* p = std::get_if<TtfsParams>(&params)) {
    return decode_ttfs_amplitudes(train, p->delta);
  }
  if (const auto* p = std::get_if<BsaParams>(&params)) {
    return decode_bsa(train, p->filter_taps);
  }
  return std::nullopt;
}

TFRepresentation pad_for_classifier(const TFRepresentation& tf,
                                    std::size_t target_channels,
                                    std::size_t target_frames) {
  if (tf.num_channels() > target_channels || tf.num_frames() > target_frames) {
    throw ShapeError("exceeds target shape: " + std::to_string(tf.num_channels()) +
                     "x" + std::to_string(tf.num_frames()) + " > " +
                     std::to_string(target_channels) + "x" +
                     std::to_string(target_frames));
  }
  TFRepresentation out(target_channels, target_frames, tf.frame_rate_hz(), {},
                       TFKind::Decoded);
  for (std::size_t c = 0; c < tf.num_channels(); ++c) {
    const auto src = tf.channel(c);
    std::copy(src.begin(), src.end(), out.channel(c).begin());
  }
  return out;
}

Tensor to_tensor(const TFRepresentation& tf) {
  Tensor t;
  t.dims = {static_cast<std::uint32_t>(tf.num_channels()),
            static_cast<std::uint32_t>(tf.num_frames())};
  t.data.assign(tf.values().begin(), tf.values().end());
  return t;
}

Tensor stack_tensors(std::span<const TFRepresentation> batch) {
  Tensor t;
  if (batch.empty()) {
    t.dims = {0, 0, 0};
    return t;
  }
  const std::size_t channels = batch.front().num_channels();
  const std::size_t frames = batch.front().num_frames();
  t.dims = {static_cast<std::uint32_t>(batch.size()),
            static_cast<std::uint32_t>(channels), static_cast<std::uint32_t>(frames)};
  t.data.reserve(batch.size() * channels * frames);
  for (const auto& tf : batch) {
    if (tf.num_channels() != channels || tf.num_frames() != frames) {
      throw ShapeError("cannot stack representations of different shapes");
    }
    t.data.insert(t.data.end(), tf.values().begin(), tf.values().end());
  }
  return t;
}

std::vector<std::uint8_t> serialize_tensor(const Tensor& tensor) {
  if (tensor.dims.size() > 255) throw ShapeError("tensor rank exceeds 255");
  std::uint64_t count = 1;
  for (std::uint32_t d : tensor.dims) count *= d;
  if (count != tensor.data.size()) {
    throw ShapeError("tensor payload does not match its dimensions");
  }
  std::vector<std::uint8_t> out;
  out.reserve(5 + 4 * tensor.dims.size() + 4 * tensor.data.size());
  out.insert(out.end(), kTensorMagic.begin(), kTensorMagic.end());
  out.push_back(static_cast<std::uint8_t>(tensor.dims.size()));
  for (std::uint32_t d : tensor.dims) put_u32(out, d);
  for (float v : tensor.data) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

Tensor parse_tensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 5) {
    throw ParseError(ParseError::Code::Truncated, bytes.size(), "truncated tensor header");
  }
  if (!std::equal(kTensorMagic.begin(), kTensorMagic.end(), bytes.begin(),
                  [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; })) {
    throw ParseError(ParseError::Code::BadMagic, 0, "bad tensor magic");
  }
  const std::size_t rank = bytes[4];
  const std::size_t header = 5 + 4 * rank;
  if (bytes.size() < header) {
    throw ParseError(ParseError::Code::Truncated, bytes.size(), "truncated tensor dims");
  }
  Tensor t;
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    t.dims.push_back(get_u32(bytes, 5 + 4 * i));
    count *= t.dims.back();
    if (count > std::numeric_limits<std::uint32_t>::max()) {
      throw ParseError(ParseError::Code::BadHeader, 5 + 4 * i, "tensor too large");
    }
  }
  const std::uint64_t expected = header + 4 * count;
  if (bytes.size() < expected) {
    throw ParseError(ParseError::Code::Truncated, bytes.size(), "truncated tensor payload");
  }
  if (bytes.size() > expected) {
    throw ParseError(ParseError::Code::CountMismatch, expected,
                     "trailing bytes after tensor payload");
  }
  t.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    t.data[i] = std::bit_cast<float>(get_u32(bytes, header + 4 * i));
  }
  return t;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void export_tensor(const Tensor& tensor, const std::filesystem::path& path) {
  write_file_bytes(path, serialize_tensor(tensor));
}

Tensor import_tensor(const std::filesystem::path& path) {
  return parse_tensor(read_file_bytes(path));
}

}  // namespace spikecodec
