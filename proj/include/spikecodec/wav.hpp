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

// Mono RIFF/WAVE I/O: 8-bit unsigned PCM, 16-bit signed PCM, 32-bit float.

#ifndef SPIKECODEC_WAV_HPP_
#define SPIKECODEC_WAV_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "spikecodec/core.hpp"

namespace spikecodec {

enum class WavSampleFormat { Pcm8, Pcm16, Float32 };

AudioSignal parse_wav(std::span<const std::uint8_t> bytes);
AudioSignal read_wav(const std::filesystem::path& path);

// Samples are clipped to [-1, 1] for the integer formats.
std::vector<std::uint8_t> serialize_wav(const AudioSignal& signal,
                                        WavSampleFormat format);
void write_wav(const std::filesystem::path& path, const AudioSignal& signal,
               WavSampleFormat format = WavSampleFormat::Pcm16);

}  // namespace spikecodec

#endif  // SPIKECODEC_WAV_HPP_
