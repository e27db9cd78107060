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
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "spikecodec/cli.hpp"
#include "spikecodec/wav.hpp"

namespace spikecodec::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw UsageError("not a number: '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Frontend parse_frontend(const std::string& name) {
  if (name == "spectrogram") return Frontend::Spectrogram;
  if (name == "cochleagram") return Frontend::Cochleagram;
  throw UsageError("unknown front-end '" + name + "'");
}

bool is_known_encoder(const std::string& name) {
  return name == "sod" || name == "sod_on" || name == "sod_off" || name == "ttfs" ||
         name == "lif" || name == "bsa";
}

std::vector<double> parse_grid(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  if (parts.size() == 4 && (parts[0] == "log" || parts[0] == "lin")) {
    const double lo = parse_double(parts[1]);
    const double hi = parse_double(parts[2]);
    const double count = parse_double(parts[3]);
    if (!(count >= 1.0) || count != std::floor(count)) {
      throw UsageError("grid point count must be a positive integer");
    }
    const bool log_scale = parts[0] == "log";
    if (log_scale && !(lo > 0.0 && hi > 0.0)) {
      throw UsageError("log grid bounds must be positive");
    }
    const auto n = static_cast<std::size_t>(count);
    std::vector<double> out(n, lo);
    for (std::size_t i = 1; i < n; ++i) {
      const double u = static_cast<double>(i) / static_cast<double>(n - 1);
      out[i] = log_scale ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u;
    }
    if (n > 1) out.back() = hi;
    return out;
  }
  std::vector<double> out;
  for (const std::string& item : split(spec, ',')) {
    if (!item.empty()) out.push_back(parse_double(item));
  }
  if (out.empty()) throw UsageError("empty parameter grid");
  return out;
}

std::vector<fs::path> expand_corpus(std::span<const fs::path> inputs) {
  std::vector<fs::path> out;
  for (const fs::path& p : inputs) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".wav") {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end(),
                [](const fs::path& a, const fs::path& b) { return a.string() < b.string(); });
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

std::string format_bsa_params(const BsaChoice& choice) {
  std::ostringstream out;
  out << "# spikecodec BSA parameters\n"
      << "cutoff_hz=" << format_exact(choice.cutoff_hz) << '\n'
      << "filter_len=" << choice.filter_len << '\n'
      << "threshold=" << format_exact(choice.threshold) << '\n'
      << "snr_db=" << format_exact(choice.snr_db) << '\n'
      << "taps=";
  for (std::size_t i = 0; i < choice.filter_taps.size(); ++i) {
    if (i > 0) out << ',';
    out << format_exact(choice.filter_taps[i]);
  }
  out << '\n';
  return out.str();
}

BsaParamFile parse_bsa_params(const std::string& text) {
  BsaParamFile p;
  bool have_taps = false;
  bool have_threshold = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("malformed BSA parameter line: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "cutoff_hz") {
      p.cutoff_hz = parse_double(value);
    } else if (key == "filter_len") {
      p.filter_len = static_cast<std::size_t>(parse_double(value));
    } else if (key == "threshold") {
      p.threshold = parse_double(value);
      have_threshold = true;
    } else if (key == "snr_db") {
      p.snr_db = parse_double(value);
    } else if (key == "taps") {
      for (const std::string& t : split(value, ',')) p.filter_taps.push_back(parse_double(t));
      have_taps = true;
    }
  }
  if (!have_taps || p.filter_taps.empty() || !have_threshold) {
    throw UsageError("BSA parameter file needs 'taps' and 'threshold'");
  }
  return p;
}

BsaParamFile read_bsa_params(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_bsa_params(text.str());
}

EncoderParams make_encoder_params(const EncoderSpec& spec, double delta,
                                  const TFRepresentation& tf, const BsaParamFile* bsa) {
  if (spec.name == "sod") return SodParams{delta, SodMode::Full};
  if (spec.name == "sod_on") return SodParams{delta, SodMode::OnOnly};
  if (spec.name == "sod_off") return SodParams{delta, SodMode::OffOnly};
  if (spec.name == "ttfs") return TtfsParams{delta};
  if (spec.name == "lif") {
    const LifTauMap taus{spec.tau_min_s, spec.tau_max_s};
    return LifParams{delta, taus.taus_for(tf.center_freqs_hz())};
  }
  if (spec.name == "bsa") {
    if (bsa == nullptr) throw UsageError("bsa encoder needs --bsa-params");
    return BsaParams{bsa->filter_taps, delta};
  }
  throw UsageError("unknown encoder '" + spec.name + "'");
}

void parallel_for(std::size_t count, std::size_t parallelism,
                  const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

AudioSignal load_utterance(const fs::path& path) {
  AudioSignal signal = read_wav(path);
  if (signal.sample_rate_hz != kExpectedSampleRateHz) {
    throw Error("expected 20000 Hz, found " +
                std::to_string(static_cast<long>(signal.sample_rate_hz)) + " Hz");
  }
  validate(signal);
  return signal;
}

}  // namespace spikecodec::cli
