#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "acaug/error.hpp"
#include "acaug/mel.hpp"
#include "acaug/wav_io.hpp"

namespace acaug {

// Binary spectrogram container, all integers little-endian:
//   "SPEC" | u32 version | u32 n_mels | u32 n_frames | u8 normalized | 3 pad
//   | f32 values[n_mels * n_frames] (mel-major) | f64 min_val | f64 max_val
inline constexpr char kSpecMagic[4] = {'S', 'P', 'E', 'C'};
inline constexpr std::uint32_t kSpecVersion = 1;
inline constexpr std::size_t kSpecHeaderSize = 20;

struct SpecFile {
  MelSpectrogram spec;
  NormStats stats;
};

struct SpecHeader {
  std::uint32_t version = 0;
  std::uint32_t n_mels = 0;
  std::uint32_t n_frames = 0;
  bool normalized = false;
};

namespace spec_detail {

inline void put_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace spec_detail

/// Serializes `s` with explicit stats. Values are clamped into the finite
/// f32 range before narrowing.
inline std::string encode_spec(const MelSpectrogram& s, const NormStats& stats) {
  using spec_detail::put_le;
  if (s.values.size() != s.n_mels * s.n_frames) throw Error("spec: value count does not match shape");
  if (s.n_mels > 0xffffffffu || s.n_frames > 0xffffffffu) throw Error("spec: dimensions exceed u32");
  std::string out;
  out.reserve(kSpecHeaderSize + 4 * s.values.size() + 16);
  out.append(kSpecMagic, 4);
  put_le(out, kSpecVersion, 4);
  put_le(out, s.n_mels, 4);
  put_le(out, s.n_frames, 4);
  put_le(out, s.normalized ? 1 : 0, 1);
  put_le(out, 0, 3);
  constexpr double kMax = std::numeric_limits<float>::max();
  for (double v : s.values) {
    if (std::isnan(v)) throw Error("spec: NaN value");
    const float f = static_cast<float>(std::clamp(v, -kMax, kMax));
    put_le(out, std::bit_cast<std::uint32_t>(f), 4);
  }
  put_le(out, std::bit_cast<std::uint64_t>(stats.min_val), 8);
  put_le(out, std::bit_cast<std::uint64_t>(stats.max_val), 8);
  return out;
}

/// Serializes with stats taken from the value range.
inline std::string encode_spec(const MelSpectrogram& s) {
  auto [lo, hi] = s.min_max();
  return encode_spec(s, NormStats{lo, hi});
}

inline SpecHeader decode_spec_header(const std::vector<unsigned char>& bytes) {
  using spec_detail::get_le;
  if (bytes.size() < kSpecHeaderSize || std::memcmp(bytes.data(), kSpecMagic, 4) != 0) {
    throw Error("spec: bad magic");
  }
  SpecHeader h;
  h.version = static_cast<std::uint32_t>(get_le(bytes.data() + 4, 4));
  if (h.version != kSpecVersion) throw Error("spec: unsupported version " + std::to_string(h.version));
  h.n_mels = static_cast<std::uint32_t>(get_le(bytes.data() + 8, 4));
  h.n_frames = static_cast<std::uint32_t>(get_le(bytes.data() + 12, 4));
  h.normalized = bytes[16] != 0;
  return h;
}

inline SpecFile decode_spec(const std::vector<unsigned char>& bytes) {
  using spec_detail::get_le;
  const SpecHeader h = decode_spec_header(bytes);
  const std::uint64_t cells = static_cast<std::uint64_t>(h.n_mels) * h.n_frames;
  if (bytes.size() != kSpecHeaderSize + 4 * cells + 16) throw Error("spec: size does not match header");
  SpecFile f;
  f.spec = MelSpectrogram(h.n_mels, h.n_frames);
  f.spec.normalized = h.normalized;
  const unsigned char* p = bytes.data() + kSpecHeaderSize;
  for (std::size_t i = 0; i < cells; ++i, p += 4) {
    f.spec.values[i] = std::bit_cast<float>(static_cast<std::uint32_t>(get_le(p, 4)));
  }
  f.stats.min_val = std::bit_cast<double>(get_le(p, 8));
  f.stats.max_val = std::bit_cast<double>(get_le(p + 8, 8));
  return f;
}

inline void save_spec(const std::filesystem::path& path, const MelSpectrogram& s, const NormStats& stats) {
  write_file_bytes(path, encode_spec(s, stats));
}
inline void save_spec(const std::filesystem::path& path, const MelSpectrogram& s) {
  write_file_bytes(path, encode_spec(s));
}
inline SpecFile load_spec(const std::filesystem::path& path) { return decode_spec(read_file_bytes(path)); }

}  // namespace acaug
