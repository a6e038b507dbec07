#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "acaug/error.hpp"
#include "acaug/fft.hpp"
#include "acaug/waveform.hpp"

namespace acaug {

/// Front-end settings. Defaults reproduce the Whisper log-mel recipe:
/// 25 ms Hann window, 10 ms hop, 80 Slaney mel bands over 0-8 kHz,
/// log10 with a 1e-10 floor, clamp to (max - 8), then (x + 4) / 4.
struct MelConfig {
  std::size_t n_fft = 400;
  std::size_t hop = 160;
  std::size_t n_mels = 80;
  int sample_rate_hz = kDefaultSampleRate;
  double f_min = 0.0;
  double f_max = 8000.0;
  double log_floor = 1e-10;
  double dynamic_range = 8.0;

  std::size_t n_bins() const noexcept { return n_fft / 2 + 1; }

  void validate() const {
    if (n_fft == 0) throw Error("mel config: n_fft must be positive");
    if (hop == 0 || hop > n_fft) throw Error("mel config: hop must be in (0, n_fft]");
    if (n_mels == 0) throw Error("mel config: n_mels must be positive");
    if (sample_rate_hz <= 0) throw Error("mel config: sample rate must be positive");
    if (!(f_min >= 0.0 && f_max > f_min)) throw Error("mel config: need 0 <= f_min < f_max");
    if (!(log_floor > 0.0)) throw Error("mel config: log floor must be positive");
  }

  friend bool operator==(const MelConfig&, const MelConfig&) = default;
};

/// n_mels x n_frames grid stored mel-major: values[m * n_frames + t].
struct MelSpectrogram {
  std::size_t n_mels = 0;
  std::size_t n_frames = 0;
  std::vector<double> values;
  MelConfig config{};
  bool normalized = false;

  MelSpectrogram() = default;
  MelSpectrogram(std::size_t mels, std::size_t frames, double fill = 0.0)
      : n_mels(mels), n_frames(frames), values(mels * frames, fill) {
    config.n_mels = mels;
  }

  double& at(std::size_t mel, std::size_t frame) { return values[mel * n_frames + frame]; }
  double at(std::size_t mel, std::size_t frame) const { return values[mel * n_frames + frame]; }

  std::vector<double> column(std::size_t frame) const {
    std::vector<double> col(n_mels);
    for (std::size_t m = 0; m < n_mels; ++m) col[m] = at(m, frame);
    return col;
  }
  void set_column(std::size_t frame, const std::vector<double>& col) {
    for (std::size_t m = 0; m < n_mels; ++m) at(m, frame) = col[m];
  }

  bool same_shape(const MelSpectrogram& o) const noexcept {
    return n_mels == o.n_mels && n_frames == o.n_frames;
  }

  std::pair<double, double> min_max() const {
    if (values.empty()) return {0.0, 0.0};
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*lo, *hi};
  }
};

/// Range captured by normalize() so denormalize() can undo it.
struct NormStats {
  double min_val = 0.0;
  double max_val = 0.0;

  friend bool operator==(const NormStats&, const NormStats&) = default;
};

// Slaney mel scale: linear below 1 kHz, logarithmic above.
inline double hz_to_mel(double hz) {
  constexpr double kFSp = 200.0 / 3.0;
  constexpr double kMinLogHz = 1000.0;
  const double min_log_mel = kMinLogHz / kFSp;
  const double logstep = std::log(6.4) / 27.0;
  if (hz < kMinLogHz) return hz / kFSp;
  return min_log_mel + std::log(hz / kMinLogHz) / logstep;
}

inline double mel_to_hz(double mel) {
  constexpr double kFSp = 200.0 / 3.0;
  constexpr double kMinLogHz = 1000.0;
  const double min_log_mel = kMinLogHz / kFSp;
  const double logstep = std::log(6.4) / 27.0;
  if (mel < min_log_mel) return mel * kFSp;
  return kMinLogHz * std::exp(logstep * (mel - min_log_mel));
}

/// Centre frequencies (Hz) of the mel bands, n_mels + 2 edges included.
inline std::vector<double> mel_band_edges(const MelConfig& cfg) {
  const double lo = hz_to_mel(cfg.f_min);
  const double hi = hz_to_mel(cfg.f_max);
  std::vector<double> edges(cfg.n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cfg.n_mels + 1));
  }
  return edges;
}

/// Slaney-normalized triangular filters, n_mels x n_bins row-major.
inline std::vector<double> mel_filterbank(const MelConfig& cfg) {
  cfg.validate();
  const std::size_t n_bins = cfg.n_bins();
  const auto edges = mel_band_edges(cfg);
  std::vector<double> fb(cfg.n_mels * n_bins, 0.0);
  for (std::size_t m = 0; m < cfg.n_mels; ++m) {
    const double left = edges[m], centre = edges[m + 1], right = edges[m + 2];
    const double enorm = 2.0 / (right - left);
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * cfg.sample_rate_hz / static_cast<double>(cfg.n_fft);
      const double rise = (f - left) / (centre - left);
      const double fall = (right - f) / (right - centre);
      fb[m * n_bins + k] = std::max(0.0, std::min(rise, fall)) * enorm;
    }
  }
  return fb;
}

/// Periodic Hann window (matches torch.hann_window defaults).
inline std::vector<double> hann_window(std::size_t n) {
  constexpr double kTwoPi = 6.28318530717958647692;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
  }
  return w;
}

/// Frames produced for `length` samples under centre padding.
constexpr std::size_t frame_count(std::size_t length, std::size_t hop) noexcept {
  return length == 0 ? 0 : (length + hop - 1) / hop;
}

/// Index into a signal of length `len` extended by mirror reflection
/// (edge sample not repeated), valid for any offset.
inline std::size_t reflect_index(long long i, std::size_t len) {
  if (len == 1) return 0;
  const long long period = 2 * (static_cast<long long>(len) - 1);
  long long r = i % period;
  if (r < 0) r += period;
  if (r >= static_cast<long long>(len)) r = period - r;
  return static_cast<std::size_t>(r);
}

/// Power spectrogram |STFT|^2 as n_bins x n_frames row-major.
inline std::vector<double> power_spectrogram(const Waveform& w, const MelConfig& cfg) {
  require_valid(w, "power_spectrogram");
  cfg.validate();
  const std::size_t n_frames = frame_count(w.size(), cfg.hop);
  const std::size_t n_bins = cfg.n_bins();
  const auto window = hann_window(cfg.n_fft);
  const FftPlan plan(cfg.n_fft);
  const long long pad = static_cast<long long>(cfg.n_fft / 2);

  std::vector<double> power(n_bins * n_frames);
  std::vector<Complex> frame(cfg.n_fft), spectrum(cfg.n_fft);
  for (std::size_t t = 0; t < n_frames; ++t) {
    const long long origin = static_cast<long long>(t * cfg.hop) - pad;
    for (std::size_t i = 0; i < cfg.n_fft; ++i) {
      frame[i] = w.samples[reflect_index(origin + static_cast<long long>(i), w.size())] * window[i];
    }
    plan.forward(frame, spectrum);
    for (std::size_t k = 0; k < n_bins; ++k) power[k * n_frames + t] = std::norm(spectrum[k]);
  }
  return power;
}

/// log10(max(floor, mel power)) before any clamping or rescaling.
inline MelSpectrogram log10_mel_power(const Waveform& w, const MelConfig& cfg) {
  require_valid(w, "compute_log_mel");
  cfg.validate();
  if (w.sample_rate_hz != cfg.sample_rate_hz) {
    throw Error("compute_log_mel: waveform sample rate " + std::to_string(w.sample_rate_hz) +
                " does not match config " + std::to_string(cfg.sample_rate_hz));
  }
  const auto power = power_spectrogram(w, cfg);
  const auto fb = mel_filterbank(cfg);
  const std::size_t n_bins = cfg.n_bins();
  const std::size_t n_frames = frame_count(w.size(), cfg.hop);

  MelSpectrogram out(cfg.n_mels, n_frames);
  out.config = cfg;
  for (std::size_t m = 0; m < cfg.n_mels; ++m) {
    const double* filt = &fb[m * n_bins];
    for (std::size_t t = 0; t < n_frames; ++t) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n_bins; ++k) {
        if (filt[k] != 0.0) acc += filt[k] * power[k * n_frames + t];
      }
      out.at(m, t) = std::log10(std::max(acc, cfg.log_floor));
    }
  }
  return out;
}

/// Log-mel spectrogram with the dynamic-range clamp and affine rescale.
inline MelSpectrogram compute_log_mel(const Waveform& w, const MelConfig& cfg = {}) {
  auto spec = log10_mel_power(w, cfg);
  const double ceiling = spec.min_max().second;
  const double floor = ceiling - cfg.dynamic_range;
  for (double& v : spec.values) v = (std::max(v, floor) + 4.0) / 4.0;
  return spec;
}

/// Affine map of all values onto [0, 1]. A constant grid maps to zeros.
inline std::pair<MelSpectrogram, NormStats> normalize(const MelSpectrogram& s) {
  for (double v : s.values) {
    if (!std::isfinite(v)) throw Error("normalize: non-finite value");
  }
  auto [lo, hi] = s.min_max();
  NormStats stats{lo, hi};
  MelSpectrogram out = s;
  out.normalized = true;
  const double range = hi - lo;
  if (range > 0.0) {
    for (double& v : out.values) v = (v - lo) / range;
  } else {
    std::fill(out.values.begin(), out.values.end(), 0.0);
  }
  return {std::move(out), stats};
}

/// Inverse of normalize(). Values outside [0, 1] extrapolate linearly.
inline MelSpectrogram denormalize(const MelSpectrogram& s, const NormStats& stats) {
  MelSpectrogram out = s;
  out.normalized = false;
  const double range = stats.max_val - stats.min_val;
  for (double& v : out.values) v = v * range + stats.min_val;
  return out;
}

}  // namespace acaug
