#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "acaug/error.hpp"

namespace acaug {

namespace resample_detail {

inline constexpr std::size_t kWindowTable = 4096;

// Kaiser window w(r), r in [0, 1], tabulated once.
inline const std::array<double, kWindowTable + 2>& kaiser_table() {
  static const auto table = [] {
    constexpr double kBeta = 8.6;
    std::array<double, kWindowTable + 2> t{};
    const double norm = std::cyl_bessel_i(0.0, kBeta);
    for (std::size_t i = 0; i <= kWindowTable; ++i) {
      const double r = static_cast<double>(i) / kWindowTable;
      t[i] = std::cyl_bessel_i(0.0, kBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) / norm;
    }
    t[kWindowTable + 1] = 0.0;
    return t;
  }();
  return table;
}

inline double kaiser(double r) {
  const auto& t = kaiser_table();
  const double pos = std::min(std::abs(r), 1.0) * kWindowTable;
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  return t[i] + (t[i + 1] - t[i]) * frac;
}

}  // namespace resample_detail

/// Band-limited resampling by `ratio` (output rate / input rate) with a
/// Kaiser-windowed sinc kernel. The cutoff follows the lower Nyquist rate,
/// so downsampling is anti-aliased. Output has exactly `out_len` samples.
inline std::vector<double> resample(const std::vector<double>& in, double ratio, std::size_t out_len) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw Error("resample: ratio must be positive");
  std::vector<double> out(out_len, 0.0);
  if (in.empty()) return out;

  constexpr double kPi = 3.14159265358979323846;
  constexpr double kZeroCrossings = 16.0;
  const double cutoff = std::min(1.0, ratio) * 0.97;
  const double half_width = kZeroCrossings / cutoff;
  const auto n_in = static_cast<long long>(in.size());

  for (std::size_t i = 0; i < out_len; ++i) {
    const double centre = static_cast<double>(i) / ratio;
    const auto first = std::max(0LL, static_cast<long long>(std::ceil(centre - half_width)));
    const auto last = std::min(n_in - 1, static_cast<long long>(std::floor(centre + half_width)));
    double acc = 0.0;
    for (long long j = first; j <= last; ++j) {
      const double d = centre - static_cast<double>(j);
      const double x = cutoff * d;
      const double sinc = x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x);
      acc += in[static_cast<std::size_t>(j)] * cutoff * sinc * resample_detail::kaiser(d / half_width);
    }
    out[i] = acc;
  }
  return out;
}

/// Integer-factor decimation with anti-alias filtering.
inline std::vector<double> decimate(const std::vector<double>& in, int factor) {
  if (factor < 1) throw Error("decimate: factor must be >= 1");
  if (factor == 1) return in;
  const auto f = static_cast<std::size_t>(factor);
  return resample(in, 1.0 / factor, (in.size() + f - 1) / f);
}

}  // namespace acaug
