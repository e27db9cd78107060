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

#include "spikecodec/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <optional>
#include <string>

#include "spikecodec/codec.hpp"

namespace spikecodec {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t u16(std::span<const std::uint8_t> b, std::size_t p) {
  return static_cast<std::uint16_t>(b[p] | (b[p + 1] << 8));
}

std::uint32_t u32(std::span<const std::uint8_t> b, std::size_t p) {
  return static_cast<std::uint32_t>(b[p]) | (static_cast<std::uint32_t>(b[p + 1]) << 8) |
         (static_cast<std::uint32_t>(b[p + 2]) << 16) |
         (static_cast<std::uint32_t>(b[p + 3]) << 24);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t p, const char* tag) {
  return std::memcmp(b.data() + p, tag, 4) == 0;
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

}  // namespace

AudioSignal parse_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    throw ParseError(ParseError::Code::BadMagic, 0, "not a RIFF/WAVE file");
  }
  std::optional<FormatChunk> fmt;
  std::optional<std::span<const std::uint8_t>> data;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      // Tolerate a data chunk whose declared size overruns the file.
      if (!tag_is(bytes, pos, "data")) {
        throw ParseError(ParseError::Code::Truncated, bytes.size(), "truncated WAV chunk");
      }
      data = bytes.subspan(body);
      break;
    }
    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16) throw ParseError(ParseError::Code::BadHeader, body, "short fmt chunk");
      FormatChunk f;
      f.format = u16(bytes, body);
      f.channels = u16(bytes, body + 2);
      f.sample_rate = u32(bytes, body + 4);
      f.bits = u16(bytes, body + 14);
      if (f.format == kFormatExtensible && size >= 26) f.format = u16(bytes, body + 24);
      fmt = f;
    } else if (tag_is(bytes, pos, "data")) {
      data = bytes.subspan(body, size);
    }
    pos = body + size + (size & 1);
  }
  if (!fmt) throw ParseError(ParseError::Code::BadHeader, 12, "missing fmt chunk");
  if (!data) throw ParseError(ParseError::Code::BadHeader, 12, "missing data chunk");
  if (fmt->channels != 1) {
    throw Error("expected mono audio, found " + std::to_string(fmt->channels) + " channels");
  }

  AudioSignal signal;
  signal.sample_rate_hz = fmt->sample_rate;
  const auto& d = *data;
  if (fmt->format == kFormatPcm && fmt->bits == 8) {
    signal.samples.reserve(d.size());
    for (std::uint8_t b : d) signal.samples.push_back((static_cast<double>(b) - 128.0) / 128.0);
  } else if (fmt->format == kFormatPcm && fmt->bits == 16) {
    for (std::size_t i = 0; i + 2 <= d.size(); i += 2) {
      signal.samples.push_back(static_cast<std::int16_t>(u16(d, i)) / 32768.0);
    }
  } else if (fmt->format == kFormatFloat && fmt->bits == 32) {
    for (std::size_t i = 0; i + 4 <= d.size(); i += 4) {
      signal.samples.push_back(std::bit_cast<float>(u32(d, i)));
    }
  } else {
    throw Error("unsupported WAV encoding (format " + std::to_string(fmt->format) +
                ", " + std::to_string(fmt->bits) + " bits)");
  }
  return signal;
}

AudioSignal read_wav(const std::filesystem::path& path) {
  return parse_wav(read_file_bytes(path));
}

std::vector<std::uint8_t> serialize_wav(const AudioSignal& signal, WavSampleFormat format) {
  const std::uint16_t bits = format == WavSampleFormat::Pcm8 ? 8
                             : format == WavSampleFormat::Pcm16 ? 16
                                                                : 32;
  const std::uint16_t tag = format == WavSampleFormat::Float32 ? kFormatFloat : kFormatPcm;
  const std::uint32_t bytes_per_sample = bits / 8;
  const auto data_size = static_cast<std::uint32_t>(signal.samples.size() * bytes_per_sample);
  const auto rate = static_cast<std::uint32_t>(std::lround(signal.sample_rate_hz));

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size + 1);
  put_tag(out, "RIFF");
  put32(out, 36 + data_size + (data_size & 1));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, tag);
  put16(out, 1);
  put32(out, rate);
  put32(out, rate * bytes_per_sample);
  put16(out, static_cast<std::uint16_t>(bytes_per_sample));
  put16(out, bits);
  put_tag(out, "data");
  put32(out, data_size);
  for (double s : signal.samples) {
    switch (format) {
      case WavSampleFormat::Pcm8: {
        const long v = std::clamp(std::lround(std::clamp(s, -1.0, 1.0) * 128.0) + 128L, 0L, 255L);
        out.push_back(static_cast<std::uint8_t>(v));
        break;
      }
      case WavSampleFormat::Pcm16: {
        const long v = std::clamp(std::lround(std::clamp(s, -1.0, 1.0) * 32768.0), -32768L, 32767L);
        put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
        break;
      }
      case WavSampleFormat::Float32:
        put32(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
        break;
    }
  }
  if (data_size & 1) out.push_back(0);
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioSignal& signal,
               WavSampleFormat format) {
  write_file_bytes(path, serialize_wav(signal, format));
}

}  // namespace spikecodec
