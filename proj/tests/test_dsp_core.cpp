#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "acaug/fft.hpp"
#include "acaug/mel.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using Catch::Approx;
using namespace acaug;

TEST_CASE("FFT matches direct DFT for composite and prime lengths", "[fft]") {
  Rng rng(7);
  for (std::size_t n : {1u, 2u, 3u, 7u, 12u, 97u, 400u, 512u, 1000u}) {
    std::vector<Complex> x(n);
    for (auto& c : x) c = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const auto got = FftPlan(n).forward(x);
    double max_err = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      Complex ref{};
      for (std::size_t t = 0; t < n; ++t) {
        ref += x[t] * std::polar(1.0, -2.0 * oracle::kPi * static_cast<double>((k * t) % n) / n);
      }
      max_err = std::max(max_err, std::abs(got[k] - ref));
    }
    INFO("n = " << n);
    CHECK(max_err < 1e-9);
  }
}

TEST_CASE("FFT inverse round trip", "[fft]") {
  Rng rng(3);
  std::vector<Complex> x(400);
  for (auto& c : x) c = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  const FftPlan plan(400);
  const auto back = plan.inverse(plan.forward(x));
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back[i] - x[i]) < 1e-12);
  CHECK_THROWS_AS(FftPlan(0), Error);
}

TEST_CASE("silence gives a constant clamped floor", "[mel]") {
  const auto spec = compute_log_mel(testutil::make_waveform(std::vector<double>(16000, 0.0)));
  REQUIRE(spec.n_mels == 80);
  REQUIRE(spec.n_frames == 100);
  for (double v : spec.values) CHECK(v == (-10.0 + 4.0) / 4.0);
}

TEST_CASE("440 Hz tone peaks in the mel band centred nearest 440 Hz", "[mel]") {
  const auto spec = compute_log_mel(testutil::make_waveform(oracle::sine(440.0, 1.0)));
  std::size_t best = 0;
  double best_mean = -1e300;
  for (std::size_t m = 0; m < spec.n_mels; ++m) {
    double acc = 0.0;
    for (std::size_t t = 0; t < spec.n_frames; ++t) acc += spec.at(m, t);
    if (acc > best_mean) {
      best_mean = acc;
      best = m;
    }
  }
  // Oracle: the independently built filterbank's band with the largest
  // weight at the DFT bin holding 440 Hz (bin 11 at 40 Hz resolution).
  const auto fb = oracle::filterbank(80, 400, 16000, 8000.0);
  std::size_t expected = 0;
  for (std::size_t m = 1; m < fb.size(); ++m) {
    if (fb[m][11] > fb[expected][11]) expected = m;
  }
  CHECK(best == expected);
}

TEST_CASE("log-mel agrees with the direct-DFT oracle", "[mel]") {
  Rng rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> x(3000 + rng.index(2000));
    for (double& s : x) s = rng.uniform(-0.5, 0.5);
    const auto got = compute_log_mel(testutil::make_waveform(x));
    const auto ref = oracle::log_mel(x);
    REQUIRE(got.n_frames == ref[0].size());
    double max_err = 0.0;
    for (std::size_t m = 0; m < 80; ++m) {
      for (std::size_t t = 0; t < got.n_frames; ++t) max_err = std::max(max_err, std::abs(got.at(m, t) - ref[m][t]));
    }
    CHECK(max_err < 1e-4);
  }
}

TEST_CASE("frame count is ceil(len / hop)", "[mel]") {
  CHECK(frame_count(16000, 160) == 100);
  CHECK(frame_count(16001, 160) == 101);
  CHECK(frame_count(1, 160) == 1);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const std::size_t len = 1 + rng.index(4000);
    std::vector<double> x(len);
    for (double& s : x) s = rng.uniform(-1, 1);
    const auto spec = compute_log_mel(testutil::make_waveform(x));
    CHECK(spec.n_frames == (len + 159) / 160);
  }
}

TEST_CASE("compute_log_mel is deterministic", "[mel]") {
  Rng rng(9);
  std::vector<double> x(8000);
  for (double& s : x) s = rng.uniform(-1, 1);
  const auto a = compute_log_mel(testutil::make_waveform(x));
  const auto b = compute_log_mel(testutil::make_waveform(x));
  CHECK(a.values == b.values);
}

TEST_CASE("scaling the waveform shifts unclamped log10 power by 2 log10 c", "[mel]") {
  Rng rng(13);
  std::vector<double> x(6400);
  for (double& s : x) s = rng.uniform(-0.3, 0.3);
  const double c = 2.5;
  std::vector<double> y = x;
  for (double& s : y) s *= c;
  const auto a = log10_mel_power(testutil::make_waveform(x), MelConfig{});
  const auto b = log10_mel_power(testutil::make_waveform(y), MelConfig{});
  std::size_t checked = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] <= -9.0) continue;  // floor region
    CHECK(b.values[i] - a.values[i] == Approx(2.0 * std::log10(c)).margin(1e-9));
    ++checked;
  }
  CHECK(checked > 1000);
}

TEST_CASE("compute_log_mel rejects bad input", "[mel]") {
  CHECK_THROWS_AS(compute_log_mel(testutil::make_waveform({})), Error);
  CHECK_THROWS_AS(compute_log_mel(testutil::make_waveform({0.1, std::nan(""), 0.2})), Error);
  CHECK_THROWS_AS(compute_log_mel(testutil::make_waveform({0.1, 0.2}, 8000)), Error);
  MelConfig bad;
  bad.hop = 500;
  CHECK_THROWS_AS(compute_log_mel(testutil::make_waveform({0.1, 0.2}), bad), Error);
}

TEST_CASE("short inputs still frame via repeated reflection", "[mel]") {
  const auto spec = compute_log_mel(testutil::make_waveform({0.5, -0.25, 0.1}));
  CHECK(spec.n_frames == 1);
  CHECK(reflect_index(-1, 3) == 1);
  CHECK(reflect_index(3, 3) == 1);
  CHECK(reflect_index(-5, 3) == 1);
  CHECK(reflect_index(7, 1) == 0);
}

TEST_CASE("normalize maps min to 0 and max to 1", "[norm]") {
  const auto [n, stats] = normalize(testutil::from_rows({{2, 4}, {6, 10}}));
  CHECK(n.values == std::vector<double>{0.0, 0.25, 0.5, 1.0});
  CHECK(stats == NormStats{2, 10});
  CHECK(n.normalized);
}

TEST_CASE("normalize of a constant grid is all zeros", "[norm]") {
  const auto [n, stats] = normalize(testutil::from_rows({{5, 5}, {5, 5}}));
  CHECK(n.values == std::vector<double>(4, 0.0));
  CHECK(stats == NormStats{5, 5});
  const auto back = denormalize(testutil::from_rows({{0.3, 1.7}}), stats);
  CHECK(back.values == std::vector<double>{5.0, 5.0});
}

TEST_CASE("normalize leaves a [0,1] grid with both endpoints unchanged", "[norm]") {
  const auto s = testutil::from_rows({{0.0, 0.3}, {0.7, 1.0}});
  CHECK(normalize(s).first.values == s.values);
}

TEST_CASE("denormalize extrapolates linearly", "[norm]") {
  const auto out = denormalize(testutil::from_rows({{1.5}}), NormStats{0, 10});
  CHECK(out.values[0] == Approx(15.0));
  CHECK_FALSE(out.normalized);
}

TEST_CASE("normalize round trip within 1e-6 of the range", "[norm][property]") {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const double lo = rng.uniform(-100, 100);
    const auto s = testutil::random_spec(rng, 1 + rng.index(20), 1 + rng.index(50), lo, lo + rng.uniform(1e-3, 50));
    auto [n, stats] = normalize(s);
    for (double v : n.values) REQUIRE((v >= 0.0 && v <= 1.0));
    const auto back = denormalize(n, stats);
    const double range = stats.max_val - stats.min_val;
    if (range == 0.0) continue;
    for (std::size_t k = 0; k < s.values.size(); ++k) {
      REQUIRE(std::abs(back.values[k] - s.values[k]) / range < 1e-6);
    }
  }
}
