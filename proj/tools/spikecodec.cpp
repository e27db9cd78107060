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

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spikecodec/cli.hpp"

namespace sc = spikecodec;
namespace cli = spikecodec::cli;

namespace {

const std::map<std::string, sc::Frontend> kFrontends{
    {"spectrogram", sc::Frontend::Spectrogram},
    {"cochleagram", sc::Frontend::Cochleagram}};

const char* const kSubcommands[] = {"features", "encode", "decode", "sweep", "bsa-optimize"};

std::string config_path;

void add_config(CLI::App* sub) {
  sub->add_option("--config", config_path,
                  "Flat key=value file; keys are long option names, command line wins");
}

void add_common(CLI::App* sub, std::size_t& parallelism) {
  add_config(sub);
  sub->add_option("-j,--parallelism", parallelism, "Worker threads")
      ->envname("SPIKECODEC_THREADS")
      ->check(CLI::PositiveNumber);
}

void add_frontend(CLI::App* sub, sc::Frontend& frontend) {
  sub->add_option("--frontend", frontend, "spectrogram or cochleagram")
      ->transform(CLI::CheckedTransformer(kFrontends, CLI::ignore_case));
}

void add_encoder(CLI::App* sub, cli::EncoderSpec& spec) {
  sub->add_option("--encoder", spec.name, "sod, sod_on, sod_off, ttfs, lif or bsa")
      ->check(CLI::IsMember({"sod", "sod_on", "sod_off", "ttfs", "lif", "bsa"}));
  sub->add_option("--tau-min", spec.tau_min_s, "LIF shortest time constant (s)");
  sub->add_option("--tau-max", spec.tau_max_s, "LIF longest time constant (s)");
  sub->add_option("--bsa-params", spec.bsa_params, "Parameter file from bsa-optimize");
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  for (const std::string& a : args) {
    if (a == flag || a.starts_with(flag + "=")) return true;
  }
  return false;
}

// Expands "--config FILE" into "--key=value" arguments placed right after
// the subcommand, skipping options already given on the command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::size_t sub = 0;
  for (std::size_t i = 1; i < args.size() && sub == 0; ++i) {
    for (const char* name : kSubcommands) {
      if (args[i] == name) sub = i;
    }
  }
  std::string path;
  for (std::size_t i = sub + 1; sub != 0 && i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw cli::UsageError("cannot read config file " + path);
  std::vector<std::string> injected;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == ';' ||
        line[first] == '[') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw cli::UsageError("malformed config line: " + line);
    std::string key = CLI::detail::trim_copy(line.substr(0, eq));
    const std::string value = CLI::detail::trim_copy(line.substr(eq + 1), " \t\r\"");
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    if (!has_flag(args, flag)) injected.push_back(flag + "=" + value);
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub) + 1, injected.begin(),
              injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audio to spike-train encoding, AER codec and metrics"};
  app.require_subcommand(1, 1);

  cli::FeaturesOptions features;
  auto* features_cmd = app.add_subcommand("features", "Write normalized front-end tensors");
  features_cmd->add_option("inputs", features.inputs, "Mono 20 kHz WAV files");
  add_frontend(features_cmd, features.frontend);
  features_cmd->add_option("-o,--out", features.out_dir, "Output directory");
  add_common(features_cmd, features.parallelism);

  cli::EncodeOptions encode;
  std::uint32_t tick_ns = 0;
  auto* encode_cmd = app.add_subcommand("encode", "Encode WAV files to AER spike streams");
  encode_cmd->add_option("inputs", encode.inputs, "Mono 20 kHz WAV files");
  add_frontend(encode_cmd, encode.frontend);
  add_encoder(encode_cmd, encode.encoder);
  encode_cmd->add_option("--delta", encode.encoder.delta, "Encoder threshold");
  encode_cmd->add_option("--tick-ns", tick_ns,
                         "AER tick length (default 62500 for ttfs, 1000000 otherwise)")
      ->check(CLI::PositiveNumber);
  encode_cmd->add_option("-o,--out", encode.out_dir, "Output directory");
  add_common(encode_cmd, encode.parallelism);

  cli::DecodeOptions decode;
  auto* decode_cmd = app.add_subcommand("decode", "Decode AER streams to padded tensors");
  decode_cmd->add_option("inputs", decode.inputs, "AER files");
  decode_cmd->add_option("--pad-channels", decode.pad_channels, "Target channel count")
      ->capture_default_str();
  decode_cmd->add_option("--pad-frames", decode.pad_frames, "Target frame count")->required();
  decode_cmd->add_option("--source-channels", decode.source_channels,
                         "Channels of the encoded representation")
      ->capture_default_str();
  decode_cmd->add_option("--frame-rate", decode.frame_rate_hz, "Frame rate in Hz")
      ->capture_default_str();
  decode_cmd->add_option("-o,--out", decode.out_dir, "Output directory");
  add_config(decode_cmd);

  cli::SweepOptions sweep;
  std::string sweep_grid;
  auto* sweep_cmd = app.add_subcommand("sweep", "Density / SNR / BCR table over a threshold grid");
  sweep_cmd->add_option("corpus", sweep.corpus, "WAV files or directories");
  add_frontend(sweep_cmd, sweep.frontend);
  add_encoder(sweep_cmd, sweep.encoder);
  sweep_cmd->add_option("--grid", sweep_grid, "log:lo:hi:n, lin:lo:hi:n or a comma list")
      ->required();
  sweep_cmd->add_option("-o,--out", sweep.out_table, "Table path ('-' for stdout)");
  add_common(sweep_cmd, sweep.parallelism);

  cli::BsaOptimizeOptions bsa;
  std::string cutoffs = "25,50,100,200";
  std::string lengths = "5,10,20";
  std::string thresholds = "0.01,0.05,0.1,0.2";
  auto* bsa_cmd = app.add_subcommand("bsa-optimize", "Grid-search the BSA filter and threshold");
  bsa_cmd->add_option("corpus", bsa.corpus, "WAV files or directories");
  add_frontend(bsa_cmd, bsa.frontend);
  bsa_cmd->add_option("--cutoffs", cutoffs, "Filter cutoffs in Hz")->capture_default_str();
  bsa_cmd->add_option("--lengths", lengths, "Filter lengths in frames")->capture_default_str();
  bsa_cmd->add_option("--thresholds", thresholds, "Spike thresholds")->capture_default_str();
  bsa_cmd->add_option("--subset-fraction", bsa.grid.subset_fraction,
                      "Fraction of the corpus scored")
      ->capture_default_str();
  bsa_cmd->add_option("--seed", bsa.seed, "Subset selection seed")->capture_default_str();
  bsa_cmd->add_option("-o,--out", bsa.out_params, "Parameter file ('-' for stdout)");
  add_common(bsa_cmd, bsa.parallelism);

  try {
    if (const char* env = std::getenv("SPIKECODEC_THREADS"); env != nullptr && *env != '\0') {
      std::size_t threads = 0;
      if (!CLI::detail::lexical_cast(std::string(env), threads) || threads == 0) {
        throw cli::UsageError("SPIKECODEC_THREADS must be a positive integer");
      }
    }
    std::vector<std::string> args = expand_config({argv, argv + argc});
    std::vector<char*> raw;
    for (std::string& a : args) raw.push_back(a.data());
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  try {
    if (*features_cmd) return cli::run_features(features, std::cout, std::cerr);
    if (*encode_cmd) {
      if (tick_ns != 0) encode.tick_ns = tick_ns;
      return cli::run_encode(encode, std::cout, std::cerr);
    }
    if (*decode_cmd) return cli::run_decode(decode, std::cout, std::cerr);
    if (*sweep_cmd) {
      sweep.grid = cli::parse_grid(sweep_grid);
      return cli::run_sweep(sweep, std::cout, std::cerr);
    }
    if (*bsa_cmd) {
      for (double v : cli::parse_grid(cutoffs)) bsa.grid.cutoff_hz_candidates.push_back(v);
      for (double v : cli::parse_grid(lengths)) {
        bsa.grid.filter_len_candidates.push_back(static_cast<std::size_t>(v));
      }
      bsa.grid.threshold_candidates = cli::parse_grid(thresholds);
      return cli::run_bsa_optimize(bsa, std::cout, std::cerr);
    }
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitFailure;
  }
  return cli::kExitUsage;
}
