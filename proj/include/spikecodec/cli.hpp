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

// Batch commands behind the spikecodec tool. Each run_* returns a process
// exit code: 0 success, 1 processing failure, 2 usage error.

#ifndef SPIKECODEC_CLI_HPP_
#define SPIKECODEC_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spikecodec/core.hpp"
#include "spikecodec/encoders.hpp"

namespace spikecodec::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr double kExpectedSampleRateHz = 20000.0;

class UsageError : public Error {
 public:
  using Error::Error;
};

Frontend parse_frontend(const std::string& name);

// "sod", "sod_on", "sod_off", "ttfs", "lif", "bsa".
bool is_known_encoder(const std::string& name);

// Comma list ("0.1,0.01"), or "log:lo:hi:n" / "lin:lo:hi:n" with n >= 1
// points, endpoints included, ordered lo to hi.
std::vector<double> parse_grid(const std::string& spec);

// Files are kept in the given order; directories contribute their *.wav
// files in lexicographic order.
std::vector<fs::path> expand_corpus(std::span<const fs::path> inputs);

struct BsaParamFile {
  double cutoff_hz = 0.0;
  std::size_t filter_len = 0;
  double threshold = 0.0;
  double snr_db = 0.0;
  std::vector<double> filter_taps;
};

std::string format_bsa_params(const BsaChoice& choice);
BsaParamFile parse_bsa_params(const std::string& text);
BsaParamFile read_bsa_params(const fs::path& path);

struct EncoderSpec {
  std::string name = "sod";
  double delta = 0.1;
  double tau_min_s = 0.020;
  double tau_max_s = 0.040;
  std::optional<fs::path> bsa_params;
};

// Resolves per-utterance parameters (LIF time constants depend on the
// representation's center frequencies). `delta` overrides spec.delta.
EncoderParams make_encoder_params(const EncoderSpec& spec, double delta,
                                  const TFRepresentation& tf,
                                  const BsaParamFile* bsa);

// Runs fn(0..count-1) on up to `parallelism` threads; results come back in
// index order.
void parallel_for(std::size_t count, std::size_t parallelism,
                  const std::function<void(std::size_t)>& fn);

// Reads a WAV and enforces mono 20 kHz.
AudioSignal load_utterance(const fs::path& path);

struct FeaturesOptions {
  std::vector<fs::path> inputs;
  Frontend frontend = Frontend::Cochleagram;
  fs::path out_dir = ".";
  std::size_t parallelism = 1;
};

struct EncodeOptions {
  std::vector<fs::path> inputs;
  Frontend frontend = Frontend::Cochleagram;
  EncoderSpec encoder;
  std::optional<std::uint32_t> tick_ns;  // default depends on the encoder
  fs::path out_dir = ".";
  std::size_t parallelism = 1;
};

struct DecodeOptions {
  std::vector<fs::path> inputs;
  std::uint32_t pad_channels = 64;
  std::uint32_t pad_frames = 0;
  std::uint32_t source_channels = 24;
  double frame_rate_hz = 1000.0;
  fs::path out_dir = ".";
};

struct SweepOptions {
  std::vector<fs::path> corpus;
  Frontend frontend = Frontend::Cochleagram;
  EncoderSpec encoder;
  std::vector<double> grid;
  fs::path out_table;
  std::size_t parallelism = 1;
};

struct BsaOptimizeOptions {
  std::vector<fs::path> corpus;
  Frontend frontend = Frontend::Spectrogram;
  BsaGrid grid;
  std::uint64_t seed = 0;
  fs::path out_params;
  std::size_t parallelism = 1;
};

int run_features(const FeaturesOptions& opts, std::ostream& log, std::ostream& err);
int run_encode(const EncodeOptions& opts, std::ostream& log, std::ostream& err);
int run_decode(const DecodeOptions& opts, std::ostream& log, std::ostream& err);
int run_sweep(const SweepOptions& opts, std::ostream& log, std::ostream& err);
int run_bsa_optimize(const BsaOptimizeOptions& opts, std::ostream& log, std::ostream& err);

inline constexpr const char* kSweepHeader = "param,density,snr_db,bcr_raw,bcr_mfcc";

}  // namespace spikecodec::cli

#endif  // SPIKECODEC_CLI_HPP_
