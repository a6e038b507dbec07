#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "acaug/mel.hpp"
#include "acaug/params.hpp"
#include "acaug/rng.hpp"

namespace acaug {

/// Inclusive frame range treated as one vowel pronunciation.
struct VowelGroup {
  std::size_t start_frame = 0;
  std::size_t end_frame = 0;

  std::size_t length() const noexcept { return end_frame - start_frame + 1; }
  friend bool operator==(const VowelGroup&, const VowelGroup&) = default;
};

inline double column_statistic(const MelSpectrogram& s, std::size_t frame, ColumnStatistic stat) {
  if (s.n_mels == 0) return 0.0;
  if (stat == ColumnStatistic::max) {
    double m = s.at(0, frame);
    for (std::size_t b = 1; b < s.n_mels; ++b) m = std::max(m, s.at(b, frame));
    return m;
  }
  double acc = 0.0;
  for (std::size_t b = 0; b < s.n_mels; ++b) acc += s.at(b, frame);
  return acc / static_cast<double>(s.n_mels);
}

/// Maximal runs of frames whose column statistic reaches `threshold`.
/// Expects a normalized spectrogram.
inline std::vector<VowelGroup> detect_vowel_groups(const MelSpectrogram& s, double threshold,
                                                   ColumnStatistic stat = ColumnStatistic::mean) {
  std::vector<VowelGroup> groups;
  bool open = false;
  for (std::size_t t = 0; t < s.n_frames; ++t) {
    const bool vowel = column_statistic(s, t, stat) >= threshold;
    if (vowel && !open) {
      groups.push_back({t, t});
      open = true;
    } else if (vowel) {
      groups.back().end_frame = t;
    } else {
      open = false;
    }
  }
  return groups;
}

namespace spec_aug_detail {

inline MelSpectrogram gather_columns(const MelSpectrogram& s, const std::vector<std::size_t>& source) {
  MelSpectrogram out = s;
  out.n_frames = source.size();
  out.values.assign(s.n_mels * source.size(), 0.0);
  for (std::size_t m = 0; m < s.n_mels; ++m) {
    const double* row = &s.values[m * s.n_frames];
    double* dst = &out.values[m * out.n_frames];
    for (std::size_t t = 0; t < source.size(); ++t) dst[t] = row[source[t]];
  }
  return out;
}

inline void swap_columns(MelSpectrogram& s, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t m = 0; m < s.n_mels; ++m) std::swap(s.at(m, a), s.at(m, b));
}

}  // namespace spec_aug_detail

/// Randomly lengthens or shortens each group by duplicating or deleting
/// columns at uniform positions inside it. Non-group frames keep their
/// order; returned groups index the new frame grid.
inline std::pair<MelSpectrogram, std::vector<VowelGroup>> jitter_duration(const MelSpectrogram& s,
                                                                          const std::vector<VowelGroup>& groups,
                                                                          const VowelAugParams& params, Rng& rng) {
  std::vector<std::size_t> source;
  source.reserve(s.n_frames + s.n_frames / 4 + 1);
  std::vector<VowelGroup> remapped;
  remapped.reserve(groups.size());
  std::size_t cursor = 0;
  std::vector<std::size_t> cols;
  for (const auto& g : groups) {
    for (; cursor < g.start_frame; ++cursor) source.push_back(cursor);
    cols.clear();
    for (std::size_t t = g.start_frame; t <= g.end_frame; ++t) cols.push_back(t);

    if (rng.uniform() < params.duration_prob) {
      const double factor = rng.uniform(params.duration_factor_range.low, params.duration_factor_range.high);
      const auto target = static_cast<std::size_t>(
          std::max(1LL, std::llround(static_cast<double>(g.length()) * factor)));
      while (cols.size() < target) {
        const std::size_t pos = rng.index(cols.size());
        cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(pos) + 1, cols[pos]);
      }
      while (cols.size() > target) {
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(rng.index(cols.size())));
      }
    }
    remapped.push_back({source.size(), source.size() + cols.size() - 1});
    source.insert(source.end(), cols.begin(), cols.end());
    cursor = g.end_frame + 1;
  }
  for (; cursor < s.n_frames; ++cursor) source.push_back(cursor);
  return {spec_aug_detail::gather_columns(s, source), std::move(remapped)};
}

/// Random transpositions of whole columns, confined to each group.
inline MelSpectrogram swap_within_groups(const MelSpectrogram& s, const std::vector<VowelGroup>& groups,
                                         const VowelAugParams& params, Rng& rng) {
  MelSpectrogram out = s;
  for (const auto& g : groups) {
    if (!(rng.uniform() < params.swap_prob)) continue;
    const std::size_t len = g.length();
    const auto n_swaps = static_cast<std::size_t>(
        std::max(1LL, std::llround(params.swap_fraction * static_cast<double>(len))));
    for (std::size_t i = 0; i < n_swaps; ++i) {
      const std::size_t a = rng.index(len);
      const std::size_t b = rng.index(len);
      spec_aug_detail::swap_columns(out, g.start_frame + a, g.start_frame + b);
    }
  }
  return out;
}

/// One Uniform(intensity_range) factor per group, applied to every cell of
/// the group's frames. No clamping: values may leave [0, 1].
inline MelSpectrogram scale_group_intensity(const MelSpectrogram& s, const std::vector<VowelGroup>& groups,
                                            const VowelAugParams& params, Rng& rng) {
  MelSpectrogram out = s;
  for (const auto& g : groups) {
    const double factor = rng.uniform(params.intensity_range.low, params.intensity_range.high);
    for (std::size_t m = 0; m < out.n_mels; ++m) {
      for (std::size_t t = g.start_frame; t <= g.end_frame; ++t) out.at(m, t) *= factor;
    }
  }
  return out;
}

/// What vowel_augment detected and produced, for inspection and tests.
struct VowelTrace {
  NormStats stats;
  std::vector<VowelGroup> detected;
  std::vector<VowelGroup> remapped;
};

/// Vowel-centric augmentation of a log-mel spectrogram:
/// normalize, detect groups, jitter duration, swap within groups,
/// scale group intensity, denormalize. Groups are detected once and
/// carried through the duration change by index remapping.
inline MelSpectrogram vowel_augment(const MelSpectrogram& s, const VowelAugParams& params, Rng& rng,
                                    VowelTrace* trace = nullptr) {
  params.validate();
  auto [norm, stats] = normalize(s);
  auto groups = detect_vowel_groups(norm, params.threshold, params.statistic);
  auto [stretched, remapped] = jitter_duration(norm, groups, params, rng);
  auto swapped = swap_within_groups(stretched, remapped, params, rng);
  auto scaled = scale_group_intensity(swapped, remapped, params, rng);
  if (trace) *trace = VowelTrace{stats, std::move(groups), remapped};
  return denormalize(scaled, stats);
}

}  // namespace acaug
