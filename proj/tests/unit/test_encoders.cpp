#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles/oracles.hpp"
#include "spikecodec/codec.hpp"
#include "spikecodec/encoders.hpp"
#include "spikecodec/metrics.hpp"
#include "unit/helpers.hpp"

using namespace spikecodec;
using testutil::from_rows;

namespace {

std::vector<std::size_t> frames_of(const SpikeTrainSet& s, std::uint32_t channel) {
  std::vector<std::size_t> out;
  for (const auto& e : s.events) {
    if (e.channel == channel) out.push_back(frame_of(e.time_s, s.frame_rate_hz));
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, i / (n - 1.0));
  return g;
}

}  // namespace

// ---------------------------------------------------------------- send-on-delta

TEST_CASE("SOD hand trace", "[encoders]") {
  const auto tf = from_rows({{0.0, 0.05, 0.12, 0.12, 0.01}});
  const auto s = encode_sod(tf, 0.1, SodMode::Full);
  CHECK(s.num_logical_channels == 2);
  CHECK(s.source_channels == 1);
  CHECK(s.source_frames == 5);
  REQUIRE(s.events.size() == 2);
  CHECK(s.events[0] == SpikeEvent{0, Polarity::On, 0.002});
  CHECK(s.events[1] == SpikeEvent{1, Polarity::Off, 0.004});
}

TEST_CASE("SOD on a constant channel is silent", "[encoders]") {
  const auto s = encode_sod(from_rows({std::vector<double>(50, 0.4)}), 0.01, SodMode::Full);
  CHECK(s.events.empty());
}

TEST_CASE("SOD on an exactly representable ramp", "[encoders]") {
  // Steps of 2^-7 keep every difference exact.
  std::vector<double> ramp(129);
  for (std::size_t t = 0; t < ramp.size(); ++t) ramp[t] = static_cast<double>(t) / 128.0;
  const auto s = encode_sod(from_rows({ramp}), 10.0 / 128.0, SodMode::Full);
  std::vector<std::size_t> expected;
  for (std::size_t t = 10; t <= 128; t += 10) expected.push_back(t);
  CHECK(frames_of(s, 0) == expected);
  CHECK(frames_of(s, 1).empty());
}

TEST_CASE("SOD on the decimal ramp follows floating-point differences", "[encoders]") {
  // t / 100 is not exact in binary; the oracle and the encoder must agree on
  // where each comparison lands.
  std::vector<double> ramp(101);
  for (std::size_t t = 0; t < ramp.size(); ++t) ramp[t] = static_cast<double>(t) / 100.0;
  const auto s = encode_sod(from_rows({ramp}), 0.1, SodMode::OnOnly);
  const auto trace = oracle::sod_channel(ramp, 0.1);
  CHECK(frames_of(s, 0) == trace.on);
  CHECK(frames_of(s, 0) == std::vector<std::size_t>{10, 20, 31, 42, 52, 63, 74, 85, 96});
}

TEST_CASE("SOD modes and addressing", "[encoders]") {
  std::mt19937_64 rng(5);
  const auto tf = oracle::random_tf(rng, 24, 200);
  const auto full = encode_sod(tf, 0.05, SodMode::Full);
  const auto on = encode_sod(tf, 0.05, SodMode::OnOnly);
  const auto off = encode_sod(tf, 0.05, SodMode::OffOnly);
  CHECK(full.num_logical_channels == 48);
  CHECK(on.num_logical_channels == 24);
  CHECK(off.num_logical_channels == 24);
  CHECK(full.events == oracle::sod_events(tf, 0.05, oracle::SodKeep::Both));
  CHECK(on.events == oracle::sod_events(tf, 0.05, oracle::SodKeep::On));
  CHECK(off.events == oracle::sod_events(tf, 0.05, oracle::SodKeep::Off));
  CHECK(full.events.size() == on.events.size() + off.events.size());
  for (const auto& e : full.events) {
    CHECK((e.channel < 24) == (e.polarity == Polarity::On));
  }
  CHECK(validate_spike_train(full).empty());
  CHECK_THROWS_AS(encode_sod(tf, 0.0, SodMode::Full), ParameterError);
}

TEST_CASE("SOD tracking invariant", "[encoders][property]") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto tf = oracle::random_tf(rng, 4, 150);
    const double delta = 0.03;
    const auto s = encode_sod(tf, delta, SodMode::Full);
    for (std::uint32_t c = 0; c < 4; ++c) {
      std::vector<std::size_t> spikes = frames_of(s, c);
      const auto off = frames_of(s, c + 4);
      spikes.insert(spikes.end(), off.begin(), off.end());
      std::sort(spikes.begin(), spikes.end());
      const auto y = tf.channel(c);
      std::size_t ref = 0;
      std::size_t next = 0;
      for (std::size_t t = 0; t < y.size(); ++t) {
        if (next < spikes.size() && spikes[next] == t) {
          ref = t;
          ++next;
          continue;
        }
        CHECK(std::fabs(y[t] - y[ref]) < delta);
      }
    }
  }
}

TEST_CASE("SOD is homogeneous in input and threshold", "[encoders][property]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto tf = oracle::random_tf(rng, 6, 100);
    // Power-of-two scaling keeps every difference exact.
    const double c = 0.25;
    auto scaled = tf;
    for (double& v : scaled.values()) v *= c;
    CHECK(encode_sod(scaled, 0.05 * c, SodMode::Full) == encode_sod(tf, 0.05, SodMode::Full));
  }
}

// --------------------------------------------------------------- time to spike

TEST_CASE("TTFS worked values", "[encoders]") {
  std::vector<double> y(10, 0.0);
  y[5] = 1.0;
  const auto s1 = encode_ttfs(from_rows({y}), 0.1);
  REQUIRE(s1.events.size() == 1);
  CHECK(s1.events[0].time_s == 0.005);

  y.assign(10, 0.0);
  y[5] = 0.1;
  const auto s2 = encode_ttfs(from_rows({y}), 0.1);
  REQUIRE(s2.events.size() == 1);
  CHECK(s2.events[0].time_s == Catch::Approx(0.006).epsilon(1e-12));

  y.assign(10, 0.0);
  y[3] = 0.316228;
  const auto s3 = encode_ttfs(from_rows({y}), 0.1);
  REQUIRE(s3.events.size() == 1);
  CHECK(s3.events[0].time_s == Catch::Approx(0.0035).margin(1e-8));

  y.assign(10, 0.0);
  y[7] = 0.05;
  CHECK(encode_ttfs(from_rows({y}), 0.1).events.empty());
}

TEST_CASE("TTFS threshold domain", "[encoders]") {
  const auto tf = from_rows({{0.5}});
  CHECK_THROWS_AS(encode_ttfs(tf, 0.0), ParameterError);
  CHECK_THROWS_AS(encode_ttfs(tf, 1.0), ParameterError);
  CHECK_THROWS_AS(encode_ttfs(tf, 1.5), ParameterError);
}

TEST_CASE("TTFS containment and ordering", "[encoders][property]") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double delta = std::pow(10.0, -4.0 * u(rng));
    if (delta >= 1.0) continue;
    const double a = delta + (1.0 - delta) * u(rng);
    const double b = delta + (1.0 - delta) * u(rng);
    const auto s = encode_ttfs(from_rows({{0.0, a}, {0.0, b}}), delta);
    REQUIRE(s.events.size() == 2);
    for (const auto& e : s.events) {
      CHECK(e.time_s >= 0.001);
      CHECK(e.time_s <= 0.002 + 1e-15);
    }
    const double ta = s.events[0].channel == 0 ? s.events[0].time_s : s.events[1].time_s;
    const double tb = s.events[0].channel == 0 ? s.events[1].time_s : s.events[0].time_s;
    if (a > b) CHECK(ta < tb);
    if (b > a) CHECK(tb < ta);
  }
}

TEST_CASE("TTFS agrees with the extended-precision formula", "[encoders]") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double delta = std::pow(10.0, -1.0 - 3.0 * u(rng));
    const double y = delta + (1.0 - delta) * u(rng);
    std::vector<double> row(20, 0.0);
    const std::size_t n = static_cast<std::size_t>(u(rng) * 19.0);
    row[n] = y;
    const auto s = encode_ttfs(from_rows({row}), delta);
    REQUIRE(s.events.size() == 1);
    const long double ref = oracle::ttfs_time(n, y, delta, 1000.0L);
    CHECK(std::fabs(static_cast<long double>(s.events[0].time_s) - ref) <= 1e-12L * ref + 1e-18L);
  }
}

// ------------------------------------------------------------ integrate & fire

TEST_CASE("LIF worked case fires at frame 14", "[encoders]") {
  const auto tf = from_rows({std::vector<double>(40, 1.0)});
  const std::vector<double> tau{0.020};
  const auto s = encode_lif(tf, 0.5, tau);
  REQUIRE_FALSE(s.events.empty());
  CHECK(frame_of(s.events[0].time_s, 1000.0) == 14);
  CHECK(oracle::lif_first_spike(1.0L, 0.020L, 0.001L, 0.5L, 100) == 14);
  // Reset to zero: the next spike is another 14 frames later.
  REQUIRE(s.events.size() >= 2);
  CHECK(frame_of(s.events[1].time_s, 1000.0) == 28);
}

TEST_CASE("LIF stays silent below threshold", "[encoders]") {
  const std::vector<double> tau{0.020};
  CHECK(encode_lif(from_rows({std::vector<double>(500, 0.0)}), 0.1, tau).events.empty());
  for (double level : {0.1, 0.3, 0.5, 0.99}) {
    const auto s = encode_lif(from_rows({std::vector<double>(5000, level)}), level, tau);
    CHECK(s.events.empty());
  }
}

TEST_CASE("LIF first spike matches the recursion oracle", "[encoders]") {
  const std::vector<double> taus{0.020, 0.025, 0.031, 0.040};
  // Deltas avoid values an iterate can hit exactly (dt / tau for I = 1).
  const std::vector<double> deltas{0.013, 0.047, 0.1, 0.29, 0.5};
  const std::vector<double> currents{0.02, 0.06, 0.2, 0.35, 0.6, 0.8, 1.0};
  for (double tau : taus) {
    for (double delta : deltas) {
      for (double current : currents) {
        if (current <= delta) continue;
        const std::vector<double> t{tau};
        const auto s = encode_lif(from_rows({std::vector<double>(600, current)}), delta, t);
        const std::size_t expected = oracle::lif_first_spike(current, tau, 1.0 / 1000.0, delta, 599);
        INFO("I=" << current << " tau=" << tau << " delta=" << delta);
        REQUIRE(expected != 0);
        REQUIRE_FALSE(s.events.empty());
        CHECK(frame_of(s.events[0].time_s, 1000.0) == expected);
      }
    }
  }
}

TEST_CASE("LIF potential uses the previous frame's input", "[encoders]") {
  // One strong frame followed by zeros: the potential only sees it one step
  // later, and then decays.
  std::vector<double> row(10, 0.0);
  row[3] = 1.0;
  const std::vector<double> tau{0.001};
  const auto s = encode_lif(from_rows({row}), 0.9, tau);
  REQUIRE(s.events.size() == 1);
  CHECK(frame_of(s.events[0].time_s, 1000.0) == 4);
}

TEST_CASE("LIF tau map", "[encoders]") {
  const LifTauMap map{0.020, 0.040};
  const std::vector<double> f{0.0, 100.0, 200.0, 400.0};
  const auto taus = map.taus_for(f);
  CHECK(taus[0] == 0.040);
  CHECK(taus[1] == Catch::Approx(0.040));
  CHECK(taus[3] == Catch::Approx(0.020));
  // 1/200 sits two thirds of the way from 1/100 to 1/400.
  CHECK(taus[2] == Catch::Approx(0.020 + 0.020 * (1.0 / 200 - 1.0 / 400) / (1.0 / 100 - 1.0 / 400)));
  CHECK(taus[1] > taus[2]);
  CHECK_THROWS_AS((LifTauMap{0.040, 0.020}.validate()), ParameterError);
  CHECK_THROWS_AS(encode_lif(from_rows({{0.5, 0.5}}), 0.1, std::vector<double>{0.0005}),
                  ParameterError);
  CHECK_THROWS_AS(encode_lif(from_rows({{0.5, 0.5}}), 0.1, std::vector<double>{0.02, 0.02}),
                  ParameterError);
}

TEST_CASE("LIF sub-threshold potential stays bounded", "[encoders][property]") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const auto tf = oracle::random_tf(rng, 1, 300);
    const double delta = 0.2;
    const double tau = 0.025;
    const auto s = encode_lif(tf, delta, std::vector<double>{tau});
    // Replay in long double and check the invariant between spikes.
    const auto spikes = frames_of(s, 0);
    const auto y = tf.channel(0);
    long double v = 0.0L;
    double seen = 0.0;
    std::size_t next = 0;
    for (std::size_t k = 1; k < y.size(); ++k) {
      seen = std::max(seen, y[k - 1]);
      v += (0.001L / tau) * (y[k - 1] - v);
      if (next < spikes.size() && spikes[next] == k) {
        v = 0.0L;
        ++next;
        continue;
      }
      CHECK(v < delta + 1e-12L);
      CHECK(v <= seen + 1e-12L);
    }
    CHECK(next == spikes.size());
  }
}

// --------------------------------------------------------------------- BSA

TEST_CASE("BSA filter design", "[encoders]") {
  const auto h = bsa_lowpass_taps(50.0, 10, 1000.0);
  REQUIRE(h.size() == 10);
  CHECK(std::accumulate(h.begin(), h.end(), 0.0) == Catch::Approx(1.0).epsilon(1e-14));
  for (std::size_t k = 0; k < 10; ++k) CHECK(h[k] == Catch::Approx(h[9 - k]).epsilon(1e-12));
  CHECK(h.front() > 0.0);
  CHECK(bsa_lowpass_taps(25.0, 1, 1000.0) == std::vector<double>{1.0});
  CHECK_THROWS_AS(bsa_lowpass_taps(0.0, 5, 1000.0), ParameterError);
  CHECK_THROWS_AS(bsa_lowpass_taps(50.0, 0, 1000.0), ParameterError);
}

TEST_CASE("BSA examples", "[encoders]") {
  const auto h = bsa_lowpass_taps(50.0, 10, 1000.0);
  SECTION("all-zero channel") {
    CHECK(encode_bsa(from_rows({std::vector<double>(64, 0.0)}), h, 0.05).events.empty());
  }
  SECTION("filter as input") {
    std::vector<double> row(64, 0.0);
    std::copy(h.begin(), h.end(), row.begin());
    const auto s = encode_bsa(from_rows({row}), h, 1e-6);
    REQUIRE(s.events.size() == 1);
    CHECK(s.events[0].time_s == 0.0);
  }
  SECTION("threshold above the tap sum") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> row(64, 0.0);
    for (std::size_t i = 20; i < 23; ++i) row[i] = u(rng);
    const double sum = std::accumulate(h.begin(), h.end(), 0.0);
    CHECK(encode_bsa(from_rows({row}), h, sum + 0.5).events.empty());
  }
}

TEST_CASE("BSA matches the brute-force reference", "[encoders]") {
  std::mt19937_64 rng(13);
  const std::vector<std::vector<double>> filters{
      bsa_lowpass_taps(25.0, 5, 1000.0), bsa_lowpass_taps(100.0, 10, 1000.0),
      {0.1, 0.2, 0.4, 0.2, 0.1}};
  for (int trial = 0; trial < 100; ++trial) {
    const auto tf = oracle::random_tf(rng, 1, 64);
    const std::vector<double> row(tf.channel(0).begin(), tf.channel(0).end());
    for (const auto& h : filters) {
      for (double theta : {0.0, 0.01, 0.1}) {
        const auto s = encode_bsa(tf, h, theta);
        CHECK(frames_of(s, 0) == oracle::bsa_channel(row, h, theta));
      }
    }
  }
}

TEST_CASE("BSA round trip through decode_bsa tracks the input", "[encoders]") {
  std::vector<double> row(400);
  for (std::size_t n = 0; n < row.size(); ++n) {
    row[n] = 0.5 + 0.4 * std::sin(2.0 * std::numbers::pi * 5.0 * static_cast<double>(n) / 1000.0);
  }
  const auto tf = from_rows({row});
  const auto h = bsa_lowpass_taps(50.0, 20, 1000.0);
  const auto rec = decode_bsa(encode_bsa(tf, h, 0.0), h);
  CHECK(snr_db(tf, rec) > 5.0);
}

// ------------------------------------------------------------- monotonicity

TEST_CASE("spike count is non-increasing in threshold", "[encoders][property]") {
  std::mt19937_64 rng(14);
  const auto grid = log_grid(1e-4, 0.5, 8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto tf = oracle::random_tf(rng, 24, 200);
    const auto taus = LifTauMap{}.taus_for(tf.center_freqs_hz());
    std::size_t prev_sod = SIZE_MAX;
    std::size_t prev_ttfs = SIZE_MAX;
    std::size_t prev_lif = SIZE_MAX;
    for (double d : grid) {
      const std::size_t sod = encode_sod(tf, d, SodMode::Full).events.size();
      const std::size_t ttfs = encode_ttfs(tf, d).events.size();
      const std::size_t lif = encode_lif(tf, d, taus).events.size();
      CHECK(sod <= prev_sod);
      CHECK(ttfs <= prev_ttfs);
      CHECK(lif <= prev_lif);
      prev_sod = sod;
      prev_ttfs = ttfs;
      prev_lif = lif;
    }
  }
}

// -------------------------------------------------------------- optimizer

TEST_CASE("draw_subset is seeded and sized", "[encoders]") {
  const auto a = draw_subset(100, 0.1, 42);
  CHECK(a.size() == 10);
  CHECK(a == draw_subset(100, 0.1, 42));
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(std::adjacent_find(a.begin(), a.end()) == a.end());
  CHECK(draw_subset(5, 0.1, 1).size() == 1);
  CHECK(draw_subset(30, 0.1, 1).size() == 3);
  CHECK(draw_subset(7, 1.0, 3) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
  CHECK_THROWS(draw_subset(0, 0.5, 1));
}

namespace {

std::vector<TFRepresentation> banded_corpus(std::uint64_t seed, std::size_t count) {
  // Sums of sinusoids between 30 and 50 Hz on a positive offset.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TFRepresentation> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::vector<double>> rows(3, std::vector<double>(300));
    for (auto& row : rows) {
      const double f1 = 30.0 + 20.0 * u(rng);
      const double f2 = 30.0 + 20.0 * u(rng);
      const double p1 = 6.28 * u(rng);
      const double p2 = 6.28 * u(rng);
      for (std::size_t n = 0; n < row.size(); ++n) {
        const double t = static_cast<double>(n) / 1000.0;
        row[n] = 0.5 + 0.25 * std::sin(2.0 * std::numbers::pi * f1 * t + p1) +
                 0.2 * std::sin(2.0 * std::numbers::pi * f2 * t + p2);
      }
    }
    out.push_back(normalize(from_rows(rows)).tf);
  }
  return out;
}

}  // namespace

TEST_CASE("optimize_bsa single-point grid", "[encoders]") {
  const auto corpus = banded_corpus(1, 4);
  BsaGrid grid{{50.0}, {10}, {0.05}, 0.5};
  const auto choice = optimize_bsa(corpus, grid, 3);
  CHECK(choice.cutoff_hz == 50.0);
  CHECK(choice.filter_len == 10);
  CHECK(choice.threshold == 0.05);
  CHECK(choice.filter_taps == bsa_lowpass_taps(50.0, 10, 1000.0));
  REQUIRE(choice.subset == draw_subset(4, 0.5, 3));
  double total = 0.0;
  for (std::size_t i : choice.subset) {
    total += snr_db(corpus[i], decode_bsa(encode_bsa(corpus[i], choice.filter_taps, 0.05),
                                          choice.filter_taps));
  }
  CHECK(choice.snr_db == total / static_cast<double>(choice.subset.size()));
}

TEST_CASE("optimize_bsa keeps the first of tied grid points", "[encoders]") {
  const auto corpus = banded_corpus(2, 3);
  const BsaGrid base{{25.0, 50.0, 200.0}, {10, 20}, {0.01, 0.1}, 1.0};
  const auto best = optimize_bsa(corpus, base, 0);
  BsaGrid dup = base;
  dup.threshold_candidates = {best.threshold, best.threshold};
  dup.cutoff_hz_candidates = {best.cutoff_hz, best.cutoff_hz};
  const auto again = optimize_bsa(corpus, dup, 0);
  CHECK(again.cutoff_hz == best.cutoff_hz);
  CHECK(again.threshold == best.threshold);
  CHECK(again.snr_db == best.snr_db);
}

TEST_CASE("optimize_bsa never picks a cutoff below the band", "[encoders]") {
  const auto corpus = banded_corpus(3, 6);
  const BsaGrid grid{{25.0, 50.0, 200.0}, {10, 20}, {0.0, 0.01, 0.05}, 1.0};
  // Brute force over the grid gives the reference choice.
  double best_snr = -1e300;
  double best_cutoff = 0.0;
  for (double c : grid.cutoff_hz_candidates) {
    for (std::size_t len : grid.filter_len_candidates) {
      const auto h = bsa_lowpass_taps(c, len, 1000.0);
      for (double th : grid.threshold_candidates) {
        double total = 0.0;
        for (const auto& tf : corpus) total += snr_db(tf, decode_bsa(encode_bsa(tf, h, th), h));
        if (total / 6.0 > best_snr) {
          best_snr = total / 6.0;
          best_cutoff = c;
        }
      }
    }
  }
  const auto choice = optimize_bsa(corpus, grid, 9);
  CHECK(choice.cutoff_hz == best_cutoff);
  CHECK(choice.cutoff_hz != 25.0);
}

TEST_CASE("optimize_bsa skips silent utterances and rejects an all-silent subset", "[encoders]") {
  auto corpus = banded_corpus(4, 2);
  corpus.push_back(from_rows({std::vector<double>(300, 0.0), std::vector<double>(300, 0.0),
                              std::vector<double>(300, 0.0)}));
  const BsaGrid grid{{50.0}, {10}, {0.05}, 1.0};
  const auto choice = optimize_bsa(corpus, grid, 1);
  CHECK(choice.subset == std::vector<std::size_t>{0, 1});
  const std::vector<TFRepresentation> silent{corpus.back()};
  CHECK_THROWS(optimize_bsa(silent, grid, 1));
  CHECK_THROWS_AS(optimize_bsa(corpus, BsaGrid{{}, {10}, {0.1}, 1.0}, 1), ParameterError);
}
