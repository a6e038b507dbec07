#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "acaug/error.hpp"

namespace acaug {

inline constexpr int kDefaultSampleRate = 16000;

/// Mono PCM buffer, nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = kDefaultSampleRate;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
};

/// Throws unless `w` is usable by processing operations.
inline void require_valid(const Waveform& w, const char* who) {
  if (w.sample_rate_hz <= 0) throw Error(std::string(who) + ": sample rate must be positive");
  if (w.samples.empty()) throw Error(std::string(who) + ": empty waveform");
  for (double s : w.samples) {
    if (!std::isfinite(s)) throw Error(std::string(who) + ": non-finite sample");
  }
}

}  // namespace acaug
