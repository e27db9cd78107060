#ifndef SPIKECODEC_TESTS_HELPERS_HPP_
#define SPIKECODEC_TESTS_HELPERS_HPP_

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "spikecodec/core.hpp"

namespace testutil {

inline spikecodec::TFRepresentation from_rows(const std::vector<std::vector<double>>& rows,
                                              double frame_rate = 1000.0) {
  const std::size_t frames = rows.empty() ? 0 : rows.front().size();
  std::vector<double> freqs(rows.size());
  for (std::size_t c = 0; c < rows.size(); ++c) freqs[c] = 100.0 * static_cast<double>(c + 1);
  spikecodec::TFRepresentation tf(rows.size(), frames, frame_rate, freqs,
                                  spikecodec::TFKind::Cochleagram);
  for (std::size_t c = 0; c < rows.size(); ++c) {
    for (std::size_t n = 0; n < frames; ++n) tf.at(c, n) = rows[c][n];
  }
  return tf;
}

inline spikecodec::AudioSignal tone(double freq_hz, double seconds, double amplitude = 1.0,
                                    double rate = 20000.0) {
  spikecodec::AudioSignal s;
  s.sample_rate_hz = rate;
  const auto n = static_cast<std::size_t>(std::lround(seconds * rate));
  s.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.samples[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz *
                                        static_cast<double>(i) / rate);
  }
  return s;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("spikecodec_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil

#endif  // SPIKECODEC_TESTS_HELPERS_HPP_
