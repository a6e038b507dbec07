#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "acaug/mel.hpp"

namespace acaug {

/// 8-bit grayscale raster, row 0 at the top.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
};

/// Frames run along x, mel bin 0 is the bottom row. The value range maps
/// linearly to 0..255; a constant grid renders as mid gray.
inline GrayImage render_spectrogram(const MelSpectrogram& s) {
  GrayImage img;
  img.width = s.n_frames;
  img.height = s.n_mels;
  img.pixels.resize(img.width * img.height);
  auto [lo, hi] = s.min_max();
  const double range = hi - lo;
  for (std::size_t m = 0; m < s.n_mels; ++m) {
    const std::size_t row = s.n_mels - 1 - m;
    for (std::size_t t = 0; t < s.n_frames; ++t) {
      double level = range > 0.0 ? (s.at(m, t) - lo) / range * 255.0 : 128.0;
      img.pixels[row * img.width + t] = static_cast<std::uint8_t>(std::lround(std::clamp(level, 0.0, 255.0)));
    }
  }
  return img;
}

/// Binary PGM (P5).
inline std::string encode_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  return out;
}

}  // namespace acaug
