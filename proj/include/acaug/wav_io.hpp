#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "acaug/error.hpp"
#include "acaug/resample.hpp"
#include "acaug/waveform.hpp"

namespace acaug {

namespace wav_detail {

inline std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
inline std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace wav_detail

/// Parses a RIFF/WAVE byte buffer. Accepts integer PCM (8/16/24/32-bit) and
/// 32-bit float, any channel count; channels are averaged to mono.
inline Waveform decode_wav(const std::vector<unsigned char>& bytes) {
  using namespace wav_detail;
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error("wav: not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > avail) throw Error("wav: truncated fmt chunk");
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      if (format == 0xFFFE && size >= 26) format = read_u16(chunk + 32);  // extensible subformat
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = std::min<std::size_t>(size, avail);
    }
    pos = body + size + (size & 1u);
  }
  if (channels == 0 || rate == 0) throw Error("wav: missing fmt chunk");
  if (data == nullptr) throw Error("wav: missing data chunk");
  const bool is_float = format == 3 && bits == 32;
  if (!(format == 1 && (bits == 8 || bits == 16 || bits == 24 || bits == 32)) && !is_float) {
    throw Error("wav: unsupported sample format " + std::to_string(format) + "/" + std::to_string(bits) + "-bit");
  }
  const std::size_t width = bits / 8u;
  const std::size_t n_frames = data_size / (width * channels);
  Waveform w;
  w.sample_rate_hz = static_cast<int>(rate);
  w.samples.resize(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + (i * channels + c) * width;
      double v = 0.0;
      if (is_float) {
        float f;
        std::uint32_t u = read_u32(p);
        std::memcpy(&f, &u, 4);
        v = f;
      } else if (bits == 8) {
        v = (static_cast<int>(p[0]) - 128) / 128.0;
      } else if (bits == 16) {
        v = static_cast<std::int16_t>(read_u16(p)) / 32768.0;
      } else if (bits == 24) {
        std::uint32_t u = p[0] | (p[1] << 8) | (static_cast<std::uint32_t>(p[2]) << 16);
        if (u & 0x800000u) u |= 0xff000000u;
        v = static_cast<std::int32_t>(u) / 8388608.0;
      } else {
        v = static_cast<std::int32_t>(read_u32(p)) / 2147483648.0;
      }
      acc += v;
    }
    w.samples[i] = acc / channels;
  }
  return w;
}

/// Quantizes to 16-bit with round-half-away-from-zero, clipping to range.
inline std::int16_t quantize_pcm16(double s) {
  const double scaled = std::round(s * 32768.0);
  if (scaled >= 32767.0) return 32767;
  if (scaled <= -32768.0) return -32768;
  return static_cast<std::int16_t>(scaled);
}

/// 16-bit mono PCM RIFF/WAVE bytes.
inline std::string encode_wav(const Waveform& w) {
  using namespace wav_detail;
  const auto data_bytes = static_cast<std::uint32_t>(w.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out.append("RIFF");
  put_u32(out, 36 + data_bytes);
  out.append("WAVEfmt ");
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate_hz));
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate_hz) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out.append("data");
  put_u32(out, data_bytes);
  for (double s : w.samples) put_u16(out, static_cast<std::uint16_t>(quantize_pcm16(s)));
  return out;
}

inline std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

/// Brings `w` to `target_rate` by integer decimation. Rates that are not an
/// integer multiple of the target are rejected.
inline Waveform conform_sample_rate(Waveform w, int target_rate) {
  if (w.sample_rate_hz == target_rate) return w;
  if (w.sample_rate_hz < target_rate || w.sample_rate_hz % target_rate != 0) {
    throw Error("wav: sample rate " + std::to_string(w.sample_rate_hz) + " is not an integer multiple of " +
                std::to_string(target_rate));
  }
  w.samples = decimate(w.samples, w.sample_rate_hz / target_rate);
  w.sample_rate_hz = target_rate;
  return w;
}

inline Waveform load_wav(const std::filesystem::path& path, int target_rate = kDefaultSampleRate) {
  return conform_sample_rate(decode_wav(read_file_bytes(path)), target_rate);
}

inline void save_wav(const std::filesystem::path& path, const Waveform& w) {
  write_file_bytes(path, encode_wav(w));
}

}  // namespace acaug
