#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "acaug/fft.hpp"
#include "acaug/mel.hpp"
#include "acaug/rng.hpp"
#include "acaug/waveform.hpp"

namespace testutil {

inline acaug::Waveform make_waveform(std::vector<double> samples, int rate = 16000) {
  acaug::Waveform w;
  w.samples = std::move(samples);
  w.sample_rate_hz = rate;
  return w;
}

inline acaug::MelSpectrogram from_rows(const std::vector<std::vector<double>>& rows) {
  acaug::MelSpectrogram s(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t m = 0; m < rows.size(); ++m) {
    for (std::size_t t = 0; t < rows[m].size(); ++t) s.at(m, t) = rows[m][t];
  }
  return s;
}

inline acaug::MelSpectrogram random_spec(acaug::Rng& rng, std::size_t mels, std::size_t frames, double lo = -1.5,
                                         double hi = 1.5) {
  acaug::MelSpectrogram s(mels, frames);
  for (double& v : s.values) v = rng.uniform(lo, hi);
  return s;
}

/// Spectrogram with bursty "vowel" columns: column energy alternates between
/// quiet gaps and loud runs, so detection finds several groups.
inline acaug::MelSpectrogram speechlike_spec(acaug::Rng& rng, std::size_t mels, std::size_t frames) {
  acaug::MelSpectrogram s(mels, frames);
  std::size_t t = 0;
  bool loud = false;
  while (t < frames) {
    const std::size_t run = 1 + rng.index(loud ? 25 : 15);
    const double base = loud ? rng.uniform(0.4, 1.0) : rng.uniform(-1.5, -0.5);
    for (std::size_t k = 0; k < run && t < frames; ++k, ++t) {
      for (std::size_t m = 0; m < mels; ++m) s.at(m, t) = base + rng.uniform(-0.2, 0.2);
    }
    loud = !loud;
  }
  return s;
}

/// Frequency of the strongest Hann-windowed FFT bin with parabolic refinement.
inline double peak_frequency(const std::vector<double>& x, int rate) {
  const std::size_t n = x.size();
  const acaug::FftPlan plan(n);
  std::vector<acaug::Complex> buf(n);
  const auto win = acaug::hann_window(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = x[i] * win[i];
  const auto spec = plan.forward(buf);
  std::size_t best = 1;
  for (std::size_t k = 1; k < n / 2; ++k) {
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  }
  const double a = std::log(std::abs(spec[best - 1]) + 1e-300);
  const double b = std::log(std::abs(spec[best]) + 1e-300);
  const double c = std::log(std::abs(spec[best + 1]) + 1e-300);
  const double denom = a - 2.0 * b + c;
  const double offset = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
  return (static_cast<double>(best) + offset) * rate / static_cast<double>(n);
}

}  // namespace testutil
