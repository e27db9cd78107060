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

#include <fstream>
#include <iostream>
#include <sstream>

#include "spikecodec/cli.hpp"
#include "spikecodec/codec.hpp"
#include "spikecodec/features.hpp"
#include "spikecodec/metrics.hpp"

namespace spikecodec::cli {

namespace {

// Per-input outcome, printed in input order once all workers finish.
struct Outcome {
  bool ok = false;
  std::string message;
};

int report_outcomes(const std::vector<fs::path>& inputs,
                    const std::vector<Outcome>& outcomes, std::ostream& log,
                    std::ostream& err) {
  int code = kExitOk;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].ok) {
      log << outcomes[i].message << '\n';
    } else {
      err << "error: " << inputs[i].string() << ": " << outcomes[i].message << '\n';
      code = kExitFailure;
    }
  }
  return code;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string shape_text(const TFRepresentation& tf) {
  return std::to_string(tf.num_channels()) + "x" + std::to_string(tf.num_frames());
}

std::uint32_t default_tick_ns(const std::string& encoder) {
  return encoder == "ttfs" ? kTtfsTickNs : kDefaultTickNs;
}

// Rejects bad thresholds before any file is touched.
void check_encoder_spec(const EncoderSpec& spec, double delta, const BsaParamFile* bsa) {
  if (!is_known_encoder(spec.name)) throw UsageError("unknown encoder '" + spec.name + "'");
  if (spec.name == "lif") LifTauMap{spec.tau_min_s, spec.tau_max_s}.validate();
  validate(make_encoder_params(spec, delta, TFRepresentation{}, bsa));
}

std::optional<double> reconstruction_snr(const Normalized& input,
                                         const SpikeTrainSet& spikes,
                                         const EncoderParams& params) {
  if (input.silent) return std::nullopt;
  const std::optional<TFRepresentation> recon = reconstruct(spikes, params);
  if (!recon) return std::nullopt;
  return snr_db(input.tf, *recon);
}

struct Utterance {
  Normalized features;
  double duration_s = 0.0;
};

std::vector<std::optional<Utterance>> load_corpus(const std::vector<fs::path>& files,
                                                  Frontend frontend,
                                                  std::size_t parallelism,
                                                  std::vector<Outcome>& outcomes) {
  std::vector<std::optional<Utterance>> out(files.size());
  outcomes.assign(files.size(), {});
  parallel_for(files.size(), parallelism, [&](std::size_t i) {
    try {
      const AudioSignal signal = load_utterance(files[i]);
      out[i] = Utterance{extract(signal, frontend), signal.duration_s()};
      outcomes[i] = {true, files[i].string() + ": " + shape_text(out[i]->features.tf)};
    } catch (const std::exception& e) {
      outcomes[i] = {false, e.what()};
    }
  });
  return out;
}

}  // namespace

int run_features(const FeaturesOptions& opts, std::ostream& log, std::ostream& err) {
  if (opts.inputs.empty()) {
    err << "usage error: no input files\n";
    return kExitUsage;
  }
  try {
    ensure_directory(opts.out_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  std::vector<Outcome> outcomes(opts.inputs.size());
  parallel_for(opts.inputs.size(), opts.parallelism, [&](std::size_t i) {
    const fs::path& in = opts.inputs[i];
    try {
      const Normalized features = extract(load_utterance(in), opts.frontend);
      const fs::path out = opts.out_dir / (in.stem().string() + ".spkt");
      export_tensor(to_tensor(features.tf), out);
      std::string msg = in.string() + " -> " + out.string() + " (" +
                        to_string(opts.frontend) + " " + shape_text(features.tf) + ")";
      if (features.silent) msg += " warning: silent utterance";
      outcomes[i] = {true, msg};
    } catch (const std::exception& e) {
      outcomes[i] = {false, e.what()};
    }
  });
  return report_outcomes(opts.inputs, outcomes, log, err);
}

int run_encode(const EncodeOptions& opts, std::ostream& log, std::ostream& err) {
  if (opts.inputs.empty()) {
    err << "usage error: no input files\n";
    return kExitUsage;
  }
  std::optional<BsaParamFile> bsa;
  double delta = opts.encoder.delta;
  try {
    if (opts.encoder.name == "bsa") {
      if (!opts.encoder.bsa_params) throw UsageError("bsa encoder needs --bsa-params");
      bsa = read_bsa_params(*opts.encoder.bsa_params);
      delta = bsa->threshold;
    }
    check_encoder_spec(opts.encoder, delta, bsa ? &*bsa : nullptr);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    ensure_directory(opts.out_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  const std::uint32_t tick_ns = opts.tick_ns.value_or(default_tick_ns(opts.encoder.name));

  std::vector<Outcome> outcomes(opts.inputs.size());
  std::vector<std::optional<MetricsReport>> reports(opts.inputs.size());
  parallel_for(opts.inputs.size(), opts.parallelism, [&](std::size_t i) {
    const fs::path& in = opts.inputs[i];
    try {
      const AudioSignal signal = load_utterance(in);
      const Normalized features = extract(signal, opts.frontend);
      const EncoderParams params =
          make_encoder_params(opts.encoder, delta, features.tf, bsa ? &*bsa : nullptr);
      const SpikeTrainSet spikes = encode(features.tf, params);
      const fs::path aer = opts.out_dir / (in.stem().string() + ".aer");
      write_file_bytes(aer, to_aer(spikes, tick_ns));
      const MetricsReport report =
          measure(spikes, params, opts.frontend, signal.duration_s(),
                  reconstruction_snr(features, spikes, params));
      const std::string kv = to_key_value(report);
      std::ofstream(opts.out_dir / (in.stem().string() + ".metrics.txt")) << kv;
      reports[i] = report;
      std::string msg = in.string() + " -> " + aer.string() +
                        " events=" + std::to_string(spikes.events.size()) +
                        " density=" + format_g6(report.spike_density) +
                        " bcr_raw=" + format_g6(report.bcr_raw);
      if (features.silent) msg += " warning: silent utterance";
      outcomes[i] = {true, msg};
    } catch (const std::exception& e) {
      outcomes[i] = {false, e.what()};
    }
  });
  int code = report_outcomes(opts.inputs, outcomes, log, err);

  std::vector<MetricsReport> done;
  for (const auto& r : reports) {
    if (r) done.push_back(*r);
  }
  if (!done.empty()) {
    try {
      log << "aggregate:\n" << to_key_value(aggregate(done));
    } catch (const std::exception& e) {
      err << "error: aggregate: " << e.what() << '\n';
      code = kExitFailure;
    }
  }
  return code;
}

int run_decode(const DecodeOptions& opts, std::ostream& log, std::ostream& err) {
  if (opts.inputs.empty()) {
    err << "usage error: no input files\n";
    return kExitUsage;
  }
  if (opts.pad_frames == 0) {
    err << "usage error: --pad-frames is required and must be positive\n";
    return kExitUsage;
  }
  try {
    ensure_directory(opts.out_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  std::vector<Outcome> outcomes(opts.inputs.size());
  for (std::size_t i = 0; i < opts.inputs.size(); ++i) {
    const fs::path& in = opts.inputs[i];
    try {
      AerLayout layout;
      layout.source_channels = opts.source_channels;
      layout.frame_rate_hz = opts.frame_rate_hz;
      layout.source_frames = opts.pad_frames;
      const SpikeTrainSet spikes = from_aer(read_file_bytes(in), layout);
      std::size_t late = 0;
      for (const auto& e : spikes.events) {
        if (frame_of(e.time_s, spikes.frame_rate_hz) >= opts.pad_frames) ++late;
      }
      const TFRepresentation padded =
          pad_for_classifier(decode_spikes(spikes), opts.pad_channels, opts.pad_frames);
      const fs::path out = opts.out_dir / (in.stem().string() + ".spkt");
      export_tensor(to_tensor(padded), out);
      std::string msg = in.string() + " -> " + out.string() + " (" + shape_text(padded) +
                        ", " + std::to_string(spikes.events.size()) + " events)";
      if (late > 0) msg += " warning: " + std::to_string(late) + " events past --pad-frames dropped";
      outcomes[i] = {true, msg};
    } catch (const std::exception& e) {
      outcomes[i] = {false, e.what()};
    }
  }
  return report_outcomes(opts.inputs, outcomes, log, err);
}

int run_sweep(const SweepOptions& opts, std::ostream& log, std::ostream& err) {
  const std::vector<fs::path> files = expand_corpus(opts.corpus);
  if (files.empty()) {
    err << "usage error: empty corpus\n";
    return kExitUsage;
  }
  if (opts.grid.empty()) {
    err << "usage error: empty parameter grid\n";
    return kExitUsage;
  }
  std::optional<BsaParamFile> bsa;
  try {
    if (opts.encoder.name == "bsa") {
      if (!opts.encoder.bsa_params) throw UsageError("bsa encoder needs --bsa-params");
      bsa = read_bsa_params(*opts.encoder.bsa_params);
    }
    for (double delta : opts.grid) check_encoder_spec(opts.encoder, delta, bsa ? &*bsa : nullptr);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<Outcome> outcomes;
  const auto corpus = load_corpus(files, opts.frontend, opts.parallelism, outcomes);
  int code = report_outcomes(files, outcomes, log, err);
  std::vector<const Utterance*> usable;
  for (const auto& u : corpus) {
    if (u) usable.push_back(&*u);
  }
  if (usable.empty()) {
    err << "error: no usable utterances in corpus\n";
    return kExitFailure;
  }

  std::ostringstream table;
  table << kSweepHeader << '\n';
  for (double delta : opts.grid) {
    std::vector<MetricsReport> reports(usable.size());
    parallel_for(usable.size(), opts.parallelism, [&](std::size_t i) {
      const Utterance& u = *usable[i];
      const EncoderParams params =
          make_encoder_params(opts.encoder, delta, u.features.tf, bsa ? &*bsa : nullptr);
      const SpikeTrainSet spikes = encode(u.features.tf, params);
      reports[i] = measure(spikes, params, opts.frontend, u.duration_s,
                           reconstruction_snr(u.features, spikes, params));
    });
    double snr_sum = 0.0;
    std::size_t snr_count = 0;
    for (auto& r : reports) {
      if (r.snr_db) {
        snr_sum += *r.snr_db;
        ++snr_count;
      }
      // LIF time constants follow each utterance's center frequencies, which
      // are identical within one front-end.
      r.encoder = reports.front().encoder;
    }
    const MetricsReport mean = aggregate(reports);
    const std::optional<double> snr =
        snr_count > 0 ? std::optional<double>(snr_sum / static_cast<double>(snr_count))
                      : std::nullopt;
    table << format_g6(delta) << ',' << format_g6(mean.spike_density) << ','
          << format_g6(snr) << ',' << format_g6(mean.bcr_raw) << ','
          << format_g6(mean.bcr_mfcc) << '\n';
  }

  if (opts.out_table.empty() || opts.out_table == "-") {
    log << table.str();
  } else {
    try {
      if (opts.out_table.has_parent_path()) ensure_directory(opts.out_table.parent_path());
      std::ofstream out(opts.out_table, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot create " + opts.out_table.string());
      out << table.str();
      log << "wrote " << opts.out_table.string() << " (" << opts.grid.size() << " rows, "
          << usable.size() << " utterances)\n";
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitFailure;
    }
  }
  return code;
}

int run_bsa_optimize(const BsaOptimizeOptions& opts, std::ostream& log, std::ostream& err) {
  const std::vector<fs::path> files = expand_corpus(opts.corpus);
  if (files.empty()) {
    err << "usage error: empty corpus\n";
    return kExitUsage;
  }
  try {
    opts.grid.validate();
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  std::vector<Outcome> outcomes;
  const auto corpus = load_corpus(files, opts.frontend, opts.parallelism, outcomes);
  int code = report_outcomes(files, outcomes, log, err);
  std::vector<TFRepresentation> training;
  for (const auto& u : corpus) {
    if (u) training.push_back(u->features.tf);
  }
  if (training.empty()) {
    err << "error: no usable utterances in corpus\n";
    return kExitFailure;
  }
  try {
    const BsaChoice choice = optimize_bsa(training, opts.grid, opts.seed);
    const std::string text = format_bsa_params(choice);
    if (opts.out_params.empty() || opts.out_params == "-") {
      log << text;
    } else {
      if (opts.out_params.has_parent_path()) ensure_directory(opts.out_params.parent_path());
      std::ofstream out(opts.out_params, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot create " + opts.out_params.string());
      out << text;
    }
    log << "chose cutoff_hz=" << format_g6(choice.cutoff_hz)
        << " filter_len=" << choice.filter_len
        << " threshold=" << format_g6(choice.threshold)
        << " snr_db=" << format_g6(choice.snr_db) << " over " << choice.subset.size()
        << " of " << training.size() << " utterances\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return code;
}

}  // namespace spikecodec::cli
