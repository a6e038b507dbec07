#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "acaug/error.hpp"
#include "acaug/mel.hpp"
#include "acaug/params.hpp"
#include "acaug/rng.hpp"

namespace acaug {

enum class MaskAxis { frequency, time };

/// Rows [start, start + width) for frequency bands, columns for time bands.
struct MaskBand {
  MaskAxis axis = MaskAxis::frequency;
  std::size_t start = 0;
  std::size_t width = 0;

  bool contains(std::size_t mel, std::size_t frame) const noexcept {
    const std::size_t i = axis == MaskAxis::frequency ? mel : frame;
    return i >= start && i < start + width;
  }
  friend bool operator==(const MaskBand&, const MaskBand&) = default;
};

/// Frequency bands first, then time bands. Widths are Uniform{0..max}
/// (capped at the axis length); starts are uniform over valid offsets.
inline std::vector<MaskBand> draw_mask_bands(std::size_t n_mels, std::size_t n_frames, const MaskParams& p, Rng& rng) {
  std::vector<MaskBand> bands;
  bands.reserve(p.n_freq_masks + p.n_time_masks);
  for (std::size_t i = 0; i < p.n_freq_masks; ++i) {
    const std::size_t w = rng.integer(0, std::min(p.max_freq_width, n_mels));
    bands.push_back({MaskAxis::frequency, rng.integer(0, n_mels - w), w});
  }
  for (std::size_t i = 0; i < p.n_time_masks; ++i) {
    const std::size_t w = rng.integer(0, std::min(p.max_time_width, n_frames));
    bands.push_back({MaskAxis::time, rng.integer(0, n_frames - w), w});
  }
  return bands;
}

inline bool in_any_band(const std::vector<MaskBand>& bands, std::size_t mel, std::size_t frame) {
  return std::any_of(bands.begin(), bands.end(), [&](const MaskBand& b) { return b.contains(mel, frame); });
}

inline MelSpectrogram apply_mask_bands(const MelSpectrogram& s, const std::vector<MaskBand>& bands, double value) {
  MelSpectrogram out = s;
  for (const auto& b : bands) {
    if (b.axis == MaskAxis::frequency) {
      for (std::size_t m = b.start; m < std::min(b.start + b.width, s.n_mels); ++m) {
        std::fill_n(out.values.begin() + static_cast<std::ptrdiff_t>(m * s.n_frames), s.n_frames, value);
      }
    } else {
      for (std::size_t m = 0; m < s.n_mels; ++m) {
        for (std::size_t t = b.start; t < std::min(b.start + b.width, s.n_frames); ++t) out.at(m, t) = value;
      }
    }
  }
  return out;
}

/// SpecAugment frequency and time masking (no time warping).
inline MelSpectrogram spec_augment(const MelSpectrogram& s, const MaskParams& p, Rng& rng,
                                   std::vector<MaskBand>* drawn = nullptr) {
  auto bands = draw_mask_bands(s.n_mels, s.n_frames, p, rng);
  auto out = apply_mask_bands(s, bands, p.mask_value);
  if (drawn) *drawn = std::move(bands);
  return out;
}

/// Truncates or edge-repeats frames of `b` to `n_frames`.
inline MelSpectrogram match_frames(const MelSpectrogram& b, std::size_t n_frames) {
  if (b.n_frames == n_frames) return b;
  if (b.n_frames == 0) throw Error("match_frames: source has no frames");
  MelSpectrogram out = b;
  out.n_frames = n_frames;
  out.values.assign(b.n_mels * n_frames, 0.0);
  for (std::size_t m = 0; m < b.n_mels; ++m) {
    for (std::size_t t = 0; t < n_frames; ++t) out.at(m, t) = b.at(m, std::min(t, b.n_frames - 1));
  }
  return out;
}

/// Elementwise lambda * a + (1 - lambda) * b, with b shape-adapted to a.
inline MelSpectrogram mixup(const MelSpectrogram& a, const MelSpectrogram& b, double lambda) {
  if (a.n_mels != b.n_mels) throw Error("mixup: n_mels mismatch");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("mixup: lambda must be in [0,1]");
  const auto partner = match_frames(b, a.n_frames);
  MelSpectrogram out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = lambda * a.values[i] + (1.0 - lambda) * partner.values[i];
  }
  return out;
}

/// Mixing weight ~ Beta(alpha, alpha).
inline double sample_mix_lambda(double alpha, Rng& rng) { return rng.beta(alpha, alpha); }

/// Cells inside any band come from `b`, all others from `a`.
inline MelSpectrogram spec_mix(const MelSpectrogram& a, const MelSpectrogram& b, const std::vector<MaskBand>& bands) {
  if (a.n_mels != b.n_mels) throw Error("spec_mix: n_mels mismatch");
  const auto partner = match_frames(b, a.n_frames);
  MelSpectrogram out = a;
  for (const auto& band : bands) {
    if (band.axis == MaskAxis::frequency) {
      for (std::size_t m = band.start; m < std::min(band.start + band.width, a.n_mels); ++m) {
        for (std::size_t t = 0; t < a.n_frames; ++t) out.at(m, t) = partner.at(m, t);
      }
    } else {
      for (std::size_t m = 0; m < a.n_mels; ++m) {
        for (std::size_t t = band.start; t < std::min(band.start + band.width, a.n_frames); ++t) {
          out.at(m, t) = partner.at(m, t);
        }
      }
    }
  }
  return out;
}

/// SpecMix: SpecAugment band geometry filled from a partner spectrogram.
inline MelSpectrogram spec_mix(const MelSpectrogram& a, const MelSpectrogram& b, const MixParams& p, Rng& rng,
                               std::vector<MaskBand>* drawn = nullptr) {
  p.validate();
  auto bands = draw_mask_bands(a.n_mels, a.n_frames, p.masks, rng);
  auto out = spec_mix(a, b, bands);
  if (drawn) *drawn = std::move(bands);
  return out;
}

}  // namespace acaug
