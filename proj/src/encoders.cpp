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

#include "spikecodec/encoders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "spikecodec/codec.hpp"
#include "spikecodec/metrics.hpp"

namespace spikecodec {

namespace {

SpikeTrainSet empty_train(const TFRepresentation& tf, std::size_t logical) {
  SpikeTrainSet s;
  s.num_logical_channels = static_cast<std::uint32_t>(logical);
  s.source_channels = static_cast<std::uint32_t>(tf.num_channels());
  s.source_frames = static_cast<std::uint32_t>(tf.num_frames());
  s.frame_rate_hz = tf.frame_rate_hz();
  return s;
}

double frame_time(std::size_t frame, double rate_hz) {
  return static_cast<double>(frame) / rate_hz;
}

void push(SpikeTrainSet& s, std::size_t channel, Polarity p, double t) {
  s.events.push_back({static_cast<std::uint32_t>(channel), p, t});
}

}  // namespace

SpikeTrainSet encode_sod(const TFRepresentation& tf, double delta, SodMode mode) {
  validate(EncoderParams{SodParams{delta, mode}});
  const std::size_t channels = tf.num_channels();
  const bool emit_on = mode != SodMode::OffOnly;
  const bool emit_off = mode != SodMode::OnOnly;
  SpikeTrainSet s = empty_train(tf, mode == SodMode::Full ? 2 * channels : channels);
  const std::size_t off_base = mode == SodMode::Full ? channels : 0;
  const double rate = tf.frame_rate_hz();

  for (std::size_t c = 0; c < channels; ++c) {
    const std::span<const double> y = tf.channel(c);
    std::size_t ref = 0;
    for (std::size_t t = 0; t < y.size(); ++t) {
      if (y[t] - y[ref] >= delta) {
        if (emit_on) push(s, c, Polarity::On, frame_time(t, rate));
        ref = t;
      } else if (y[ref] - y[t] >= delta) {
        if (emit_off) push(s, off_base + c, Polarity::Off, frame_time(t, rate));
        ref = t;
      }
    }
  }
  sort_events(s.events);
  return s;
}

SpikeTrainSet encode_ttfs(const TFRepresentation& tf, double delta) {
  validate(EncoderParams{TtfsParams{delta}});
  SpikeTrainSet s = empty_train(tf, tf.num_channels());
  const double log_delta = std::log(delta);
  const double rate = tf.frame_rate_hz();
  for (std::size_t c = 0; c < tf.num_channels(); ++c) {
    const std::span<const double> y = tf.channel(c);
    for (std::size_t n = 0; n < y.size(); ++n) {
      if (y[n] >= delta) {
        const double shift = std::log(y[n]) / log_delta;
        push(s, c, Polarity::Unipolar, (static_cast<double>(n) + shift) / rate);
      }
    }
  }
  sort_events(s.events);
  return s;
}

void LifTauMap::validate() const {
  if (!(tau_min_s > 0.0 && tau_min_s < tau_max_s)) {
    throw ParameterError("LIF tau map requires 0 < tau_min < tau_max");
  }
}

std::vector<double> LifTauMap::taus_for(std::span<const double> center_freqs_hz) const {
  validate();
  double f_lo = std::numeric_limits<double>::infinity();
  double f_hi = 0.0;
  for (double f : center_freqs_hz) {
    if (f > 0.0) {
      f_lo = std::min(f_lo, f);
      f_hi = std::max(f_hi, f);
    }
  }
  std::vector<double> taus(center_freqs_hz.size(), tau_max_s);
  if (!(f_hi > f_lo)) return taus;
  const double span = 1.0 / f_lo - 1.0 / f_hi;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double f = center_freqs_hz[i];
    if (f > 0.0) {
      taus[i] = tau_min_s + (tau_max_s - tau_min_s) * (1.0 / f - 1.0 / f_hi) / span;
    }
  }
  return taus;
}

SpikeTrainSet encode_lif(const TFRepresentation& tf, double delta,
                         std::span<const double> tau_s) {
  const LifParams params{delta, {tau_s.begin(), tau_s.end()}};
  validate(EncoderParams{params});
  if (tau_s.size() != tf.num_channels()) {
    throw ParameterError("LIF needs one time constant per channel");
  }
  const double dt = 1.0 / tf.frame_rate_hz();
  SpikeTrainSet s = empty_train(tf, tf.num_channels());
  for (std::size_t c = 0; c < tf.num_channels(); ++c) {
    if (tau_s[c] < dt) {
      throw ParameterError("LIF time constant shorter than the frame period");
    }
    const double step = dt / tau_s[c];
    const std::span<const double> input = tf.channel(c);
    double v = 0.0;
    for (std::size_t k = 1; k < input.size(); ++k) {
      const double current = input[k - 1];
      double next = v + step * (current - v);
      // An Euler step with 0 < step <= 1 lands between v and the input;
      // keep it strictly on v's side once rounding would reach the input.
      if (v < current) {
        next = std::min(next, std::nextafter(current, v));
      } else if (v > current) {
        next = std::max(next, std::nextafter(current, v));
      }
      v = next;
      if (v >= delta) {
        push(s, c, Polarity::Unipolar, frame_time(k, tf.frame_rate_hz()));
        v = 0.0;
      }
    }
  }
  sort_events(s.events);
  return s;
}

SpikeTrainSet encode_lif(const TFRepresentation& tf, double delta,
                         const LifTauMap& taus) {
  const std::vector<double> tau_s = taus.taus_for(tf.center_freqs_hz());
  return encode_lif(tf, delta, tau_s);
}

SpikeTrainSet encode_bsa(const TFRepresentation& tf,
                         std::span<const double> filter_taps, double threshold) {
  validate(EncoderParams{BsaParams{{filter_taps.begin(), filter_taps.end()}, threshold}});
  SpikeTrainSet s = empty_train(tf, tf.num_channels());
  const std::size_t frames = tf.num_frames();
  std::vector<double> residual(frames);
  for (std::size_t c = 0; c < tf.num_channels(); ++c) {
    const std::span<const double> y = tf.channel(c);
    std::copy(y.begin(), y.end(), residual.begin());
    for (std::size_t t = 0; t < frames; ++t) {
      const std::size_t taps = std::min(filter_taps.size(), frames - t);
      double err_spike = 0.0;
      double err_silent = 0.0;
      for (std::size_t k = 0; k < taps; ++k) {
        err_spike += std::abs(residual[t + k] - filter_taps[k]);
        err_silent += std::abs(residual[t + k]);
      }
      if (err_spike <= err_silent - threshold) {
        push(s, c, Polarity::Unipolar, frame_time(t, tf.frame_rate_hz()));
        for (std::size_t k = 0; k < taps; ++k) residual[t + k] -= filter_taps[k];
      }
    }
  }
  sort_events(s.events);
  return s;
}

SpikeTrainSet encode(const TFRepresentation& tf, const EncoderParams& params) {
  if (const auto* p = std::get_if<SodParams>(&params)) {
    return encode_sod(tf, p->delta, p->mode);
  }
  if (const auto* p = std::get_if<TtfsParams>(&params)) {
    return encode_ttfs(tf, p->delta);
  }
  if (const auto* p = std::get_if<LifParams>(&params)) {
    return encode_lif(tf, p->delta, p->tau_s);
  }
  const auto& p = std::get<BsaParams>(params);
  return encode_bsa(tf, p.filter_taps, p.threshold);
}

std::vector<double> bsa_lowpass_taps(double cutoff_hz, std::size_t length,
                                     double sample_rate_hz) {
  if (!(cutoff_hz > 0.0) || !(sample_rate_hz > 0.0)) {
    throw ParameterError("BSA filter cutoff and rate must be positive");
  }
  if (length == 0) throw ParameterError("BSA filter length must be >= 1");
  constexpr double kPi = std::numbers::pi;
  const double fc = cutoff_hz / sample_rate_hz;
  const double center = static_cast<double>(length - 1) / 2.0;
  std::vector<double> h(length);
  for (std::size_t k = 0; k < length; ++k) {
    const double t = static_cast<double>(k) - center;
    const double sinc = t == 0.0 ? 2.0 * fc : std::sin(2.0 * kPi * fc * t) / (kPi * t);
    const double window =
        0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(k + 1) /
                             static_cast<double>(length + 1));
    h[k] = sinc * window;
  }
  const double sum = std::accumulate(h.begin(), h.end(), 0.0);
  if (!(sum > 0.0)) throw ParameterError("BSA filter has non-positive DC gain");
  for (double& v : h) v /= sum;
  return h;
}

void BsaGrid::validate() const {
  if (cutoff_hz_candidates.empty() || filter_len_candidates.empty() ||
      threshold_candidates.empty()) {
    throw ParameterError("BSA grid lists must be non-empty");
  }
  if (!(subset_fraction > 0.0 && subset_fraction <= 1.0)) {
    throw ParameterError("BSA subset fraction must lie in (0, 1]");
  }
}

std::vector<std::size_t> draw_subset(std::size_t count, double fraction,
                                     std::uint64_t seed) {
  if (count == 0) throw Error("cannot draw a subset of an empty corpus");
  auto wanted = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(count) - 1e-9));
  wanted = std::clamp<std::size_t>(wanted, 1, count);
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < wanted; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (count - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(wanted);
  std::sort(idx.begin(), idx.end());
  return idx;
}

BsaChoice optimize_bsa(std::span<const TFRepresentation> training,
                       const BsaGrid& grid, std::uint64_t seed) {
  grid.validate();
  if (training.empty()) throw Error("BSA optimization needs training data");
  const double rate = training.front().frame_rate_hz();
  for (const auto& tf : training) {
    if (tf.frame_rate_hz() != rate) {
      throw ParameterError("training utterances differ in frame rate");
    }
  }

  std::vector<std::size_t> subset = draw_subset(training.size(), grid.subset_fraction, seed);
  std::erase_if(subset, [&](std::size_t i) {
    const auto v = training[i].values();
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  });
  if (subset.empty()) throw Error("BSA optimization subset has no non-silent utterance");

  BsaChoice best;
  bool have_best = false;
  for (double cutoff : grid.cutoff_hz_candidates) {
    for (std::size_t len : grid.filter_len_candidates) {
      const std::vector<double> taps = bsa_lowpass_taps(cutoff, len, rate);
      for (double threshold : grid.threshold_candidates) {
        double total = 0.0;
        for (std::size_t i : subset) {
          const SpikeTrainSet spikes = encode_bsa(training[i], taps, threshold);
          total += snr_db(training[i], decode_bsa(spikes, taps));
        }
        const double mean = total / static_cast<double>(subset.size());
        if (!have_best || mean > best.snr_db) {
          best = {cutoff, len, threshold, taps, mean, {}};
          have_best = true;
        }
      }
    }
  }
  best.subset = std::move(subset);
  return best;
}

}  // namespace spikecodec
