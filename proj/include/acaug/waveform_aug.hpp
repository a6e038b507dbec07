#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "acaug/error.hpp"
#include "acaug/fft.hpp"
#include "acaug/mel.hpp"
#include "acaug/params.hpp"
#include "acaug/resample.hpp"
#include "acaug/rng.hpp"
#include "acaug/waveform.hpp"

namespace acaug {

// ---------------------------------------------------------------------------
// Phase vocoder

struct StftSettings {
  std::size_t n_fft = 2048;
  std::size_t hop = 512;
};

/// Complex STFT, zero centre padding, n_bins x n_frames row-major.
struct ComplexStft {
  std::size_t n_bins = 0;
  std::size_t n_frames = 0;
  std::vector<Complex> bins;

  Complex& at(std::size_t k, std::size_t t) { return bins[k * n_frames + t]; }
  Complex at(std::size_t k, std::size_t t) const { return bins[k * n_frames + t]; }
};

inline ComplexStft stft(std::span<const double> x, const StftSettings& st) {
  const std::size_t pad = st.n_fft / 2;
  const std::size_t n_frames = 1 + x.size() / st.hop;
  const auto window = hann_window(st.n_fft);
  const FftPlan plan(st.n_fft);
  ComplexStft out{st.n_fft / 2 + 1, n_frames, {}};
  out.bins.resize(out.n_bins * n_frames);
  std::vector<Complex> frame(st.n_fft), spectrum(st.n_fft);
  for (std::size_t t = 0; t < n_frames; ++t) {
    for (std::size_t i = 0; i < st.n_fft; ++i) {
      const std::size_t padded = t * st.hop + i;
      const bool inside = padded >= pad && padded - pad < x.size();
      frame[i] = inside ? x[padded - pad] * window[i] : 0.0;
    }
    plan.forward(frame, spectrum);
    for (std::size_t k = 0; k < out.n_bins; ++k) out.at(k, t) = spectrum[k];
  }
  return out;
}

/// Overlap-add inverse with window-power normalization, trimmed to `length`.
inline std::vector<double> istft(const ComplexStft& d, const StftSettings& st, std::size_t length) {
  const std::size_t n_fft = st.n_fft;
  const auto window = hann_window(n_fft);
  const FftPlan plan(n_fft);
  const std::size_t full = n_fft + st.hop * (d.n_frames > 0 ? d.n_frames - 1 : 0);
  std::vector<double> y(full, 0.0), wss(full, 0.0);
  std::vector<Complex> spectrum(n_fft);
  for (std::size_t t = 0; t < d.n_frames; ++t) {
    for (std::size_t k = 0; k < d.n_bins; ++k) spectrum[k] = d.at(k, t);
    for (std::size_t k = d.n_bins; k < n_fft; ++k) spectrum[k] = std::conj(spectrum[n_fft - k]);
    spectrum[0] = spectrum[0].real();
    if (n_fft % 2 == 0) spectrum[n_fft / 2] = spectrum[n_fft / 2].real();
    const auto frame = plan.inverse(spectrum);
    for (std::size_t i = 0; i < n_fft; ++i) {
      y[t * st.hop + i] += frame[i].real() * window[i];
      wss[t * st.hop + i] += window[i] * window[i];
    }
  }
  for (std::size_t i = 0; i < full; ++i) {
    if (wss[i] > 1e-10) y[i] /= wss[i];
  }
  std::vector<double> out(length, 0.0);
  const std::size_t start = n_fft / 2;
  for (std::size_t i = 0; i < length && start + i < full; ++i) out[i] = y[start + i];
  return out;
}

/// Resamples STFT columns at fractional steps of `rate`, interpolating
/// magnitudes and accumulating phase advance per bin.
inline ComplexStft phase_vocoder(const ComplexStft& d, double rate, std::size_t hop, std::size_t n_fft) {
  constexpr double kPi = 3.14159265358979323846;
  constexpr double kTwoPi = 2.0 * kPi;
  std::vector<double> steps;
  for (double s = 0.0; s < static_cast<double>(d.n_frames); s += rate) steps.push_back(s);
  ComplexStft out{d.n_bins, steps.size(), {}};
  out.bins.resize(out.n_bins * out.n_frames);

  auto column = [&](std::size_t t, std::size_t k) { return t < d.n_frames ? d.at(k, t) : Complex{}; };
  std::vector<double> expected(d.n_bins), phase(d.n_bins);
  for (std::size_t k = 0; k < d.n_bins; ++k) {
    expected[k] = kTwoPi * static_cast<double>(hop) * static_cast<double>(k) / static_cast<double>(n_fft);
    phase[k] = std::arg(column(0, k));
  }
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto t = static_cast<std::size_t>(steps[i]);
    const double alpha = steps[i] - static_cast<double>(t);
    for (std::size_t k = 0; k < d.n_bins; ++k) {
      const Complex c0 = column(t, k), c1 = column(t + 1, k);
      const double mag = (1.0 - alpha) * std::abs(c0) + alpha * std::abs(c1);
      out.at(k, i) = std::polar(mag, phase[k]);
      double dphase = std::arg(c1) - std::arg(c0) - expected[k];
      dphase -= kTwoPi * std::round(dphase / kTwoPi);
      phase[k] += expected[k] + dphase;
    }
  }
  return out;
}

/// Changes duration by 1/rate without changing pitch.
inline std::vector<double> time_stretch(std::span<const double> x, double rate, const StftSettings& st = {}) {
  if (!(rate > 0.0)) throw Error("time_stretch: rate must be positive");
  const auto d = stft(x, st);
  const auto stretched = phase_vocoder(d, rate, st.hop, st.n_fft);
  const auto length = static_cast<std::size_t>(std::llround(static_cast<double>(x.size()) / rate));
  return istft(stretched, st, length);
}

/// Duration-preserving pitch shift: phase-vocoder stretch by 2^(-k/12)
/// followed by band-limited resampling back to the original length.
inline Waveform pitch_shift(const Waveform& w, double semitones) {
  require_valid(w, "pitch_shift");
  if (!(std::abs(semitones) <= 12.0)) throw Error("pitch_shift: |semitones| must be <= 12");
  if (semitones == 0.0) return w;
  const double rate = std::exp2(-semitones / 12.0);
  const auto stretched = time_stretch(w.samples, rate);
  Waveform out;
  out.sample_rate_hz = w.sample_rate_hz;
  out.samples = resample(stretched, rate, w.size());
  return out;
}

// ---------------------------------------------------------------------------
// Pitch rule selection

/// Index into `rules` of the rule selected by a single partition draw in
/// [0, 1). Matching rules occupy consecutive intervals of [0, 1) in table
/// order; the remainder selects nothing.
inline std::optional<std::size_t> select_pitch_rule(std::optional<Gender> gender, const std::vector<PitchRule>& rules,
                                                    double partition_draw) {
  if (!gender) return std::nullopt;
  double upper = 0.0;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (rules[i].gender != *gender) continue;
    upper += rules[i].probability;
    if (partition_draw < upper) return i;
  }
  return std::nullopt;
}

/// At most one rule fires per call. Consumes one partition draw always and
/// one semitone draw when a rule fires.
inline std::optional<double> sample_pitch_shift(std::optional<Gender> gender, const std::vector<PitchRule>& rules,
                                                Rng& rng) {
  const double draw = rng.uniform();
  const auto idx = select_pitch_rule(gender, rules, draw);
  if (!idx) return std::nullopt;
  const auto& rule = rules[*idx];
  return rng.uniform(rule.lower_semitones, rule.upper_semitones);
}

// ---------------------------------------------------------------------------
// Amplitude

inline Waveform amplitude_scale(const Waveform& w, double factor) {
  Waveform out = w;
  for (double& s : out.samples) s = std::clamp(s * factor, -1.0, 1.0);
  return out;
}

/// Draws recorded by apply_waveform_policy, for manifests and replay.
struct WaveformTrace {
  std::optional<double> semitones;
  std::optional<double> amplitude;
};

/// Pitch stage then amplitude stage, each only when enabled in `policy`.
inline Waveform apply_waveform_policy(const Waveform& w, std::optional<Gender> gender, const AugPolicy& policy,
                                      Rng& rng, WaveformTrace* trace = nullptr) {
  require_valid(w, "apply_waveform_policy");
  Waveform out = w;
  if (policy.enabled(Stage::pitch)) {
    const auto shift = sample_pitch_shift(gender, policy.pitch_rules, rng);
    if (shift) out = pitch_shift(out, *shift);
    if (trace) trace->semitones = shift;
  }
  if (policy.enabled(Stage::amplitude)) {
    const double factor = rng.uniform(policy.amplitude.low, policy.amplitude.high);
    out = amplitude_scale(out, factor);
    if (trace) trace->amplitude = factor;
  }
  return out;
}

}  // namespace acaug
