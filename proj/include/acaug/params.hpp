#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acaug/error.hpp"

namespace acaug {

enum class Gender { male, female };

inline std::optional<Gender> parse_gender(std::string_view s) {
  if (s == "male" || s == "m" || s == "M") return Gender::male;
  if (s == "female" || s == "f" || s == "F") return Gender::female;
  return std::nullopt;
}

inline const char* to_string(Gender g) { return g == Gender::male ? "male" : "female"; }

/// One row of the gender-conditioned pitch table: with `probability` the
/// pitch moves by Uniform[lower, upper] semitones.
struct PitchRule {
  Gender gender = Gender::male;
  double probability = 0.0;
  double lower_semitones = 0.0;
  double upper_semitones = 0.0;

  friend bool operator==(const PitchRule&, const PitchRule&) = default;
};

/// Default pitch table: elderly-leaning drops and child-leaning raises.
inline std::vector<PitchRule> default_pitch_rules() {
  return {
      {Gender::male, 0.2, -2.0, 0.0},
      {Gender::male, 0.3, 0.0, 4.0},
      {Gender::female, 0.3, -4.0, 0.0},
      {Gender::female, 0.3, 2.0, 6.0},
  };
}

inline void validate_pitch_rules(const std::vector<PitchRule>& rules) {
  double total[2] = {0.0, 0.0};
  for (const auto& r : rules) {
    if (!(r.probability >= 0.0 && r.probability <= 1.0)) throw Error("pitch rule: probability outside [0,1]");
    if (!(r.lower_semitones <= r.upper_semitones)) throw Error("pitch rule: lower bound exceeds upper bound");
    if (r.lower_semitones < -12.0 || r.upper_semitones > 12.0) throw Error("pitch rule: bounds outside [-12,12]");
    total[static_cast<int>(r.gender)] += r.probability;
  }
  for (double t : total) {
    if (t > 1.0 + 1e-12) throw Error("pitch rules: probabilities for one gender sum above 1");
  }
}

struct AmplitudeRange {
  double low = 0.5;
  double high = 1.5;

  void validate() const {
    if (!(low > 0.0 && low <= high)) throw Error("amplitude range: need 0 < low <= high");
  }
  friend bool operator==(const AmplitudeRange&, const AmplitudeRange&) = default;
};

struct Range {
  double low = 0.0;
  double high = 0.0;

  friend bool operator==(const Range&, const Range&) = default;
};

/// Per-frame statistic compared against the vowel threshold.
enum class ColumnStatistic { mean, max };

struct VowelAugParams {
  double threshold = 0.3;
  ColumnStatistic statistic = ColumnStatistic::mean;
  double duration_prob = 0.5;
  Range duration_factor_range{0.8, 1.25};
  double swap_prob = 0.5;
  double swap_fraction = 0.1;
  Range intensity_range{0.5, 2.0};

  void validate() const {
    if (!(threshold > 0.0 && threshold < 1.0)) throw Error("vowel params: threshold must be in (0,1)");
    for (double p : {duration_prob, swap_prob}) {
      if (!(p >= 0.0 && p <= 1.0)) throw Error("vowel params: probabilities must be in [0,1]");
    }
    if (!(duration_factor_range.low > 0.0 && duration_factor_range.low <= duration_factor_range.high)) {
      throw Error("vowel params: duration factor range must be positive and ordered");
    }
    if (!(swap_fraction >= 0.0)) throw Error("vowel params: swap fraction must be non-negative");
    if (!(intensity_range.low <= intensity_range.high)) throw Error("vowel params: intensity range not ordered");
  }
  friend bool operator==(const VowelAugParams&, const VowelAugParams&) = default;
};

/// SpecAugment band settings (LibriSpeech-style defaults).
/// Widths larger than the axis are capped when bands are drawn.
struct MaskParams {
  std::size_t n_freq_masks = 2;
  std::size_t max_freq_width = 27;
  std::size_t n_time_masks = 2;
  std::size_t max_time_width = 40;
  double mask_value = 0.0;

  friend bool operator==(const MaskParams&, const MaskParams&) = default;
};

struct MixParams {
  double alpha = 0.2;
  MaskParams masks{};

  void validate() const {
    if (!(alpha > 0.0)) throw Error("mix params: alpha must be positive");
  }
  friend bool operator==(const MixParams&, const MixParams&) = default;
};

enum class Stage { pitch, amplitude, vowel, spec_augment, mixup, spec_mix };

inline constexpr Stage kAllStages[] = {Stage::pitch, Stage::amplitude, Stage::vowel,
                                       Stage::spec_augment, Stage::mixup, Stage::spec_mix};

inline const char* to_string(Stage s) {
  switch (s) {
    case Stage::pitch: return "pitch";
    case Stage::amplitude: return "amplitude";
    case Stage::vowel: return "vowel";
    case Stage::spec_augment: return "spec_augment";
    case Stage::mixup: return "mixup";
    case Stage::spec_mix: return "spec_mix";
  }
  return "?";
}

inline std::optional<Stage> parse_stage(std::string_view s) {
  for (Stage st : kAllStages) {
    if (s == to_string(st)) return st;
  }
  return std::nullopt;
}

/// Complete augmentation configuration. Defaults enable the acoustic
/// pipeline (pitch, amplitude, vowel) with the published constants.
struct AugPolicy {
  std::vector<PitchRule> pitch_rules = default_pitch_rules();
  AmplitudeRange amplitude{};
  VowelAugParams vowel{};
  MaskParams masks{};
  MixParams mix{};
  std::vector<Stage> stages{Stage::pitch, Stage::amplitude, Stage::vowel};
  std::size_t copies_per_input = 1;

  bool enabled(Stage s) const {
    for (Stage e : stages) {
      if (e == s) return true;
    }
    return false;
  }

  bool has_spectrogram_stage() const {
    return enabled(Stage::vowel) || enabled(Stage::spec_augment) || enabled(Stage::mixup) ||
           enabled(Stage::spec_mix);
  }

  void validate() const {
    validate_pitch_rules(pitch_rules);
    amplitude.validate();
    vowel.validate();
    mix.validate();
    if (copies_per_input < 1) throw Error("policy: copies_per_input must be >= 1");
  }

  friend bool operator==(const AugPolicy&, const AugPolicy&) = default;
};

}  // namespace acaug
