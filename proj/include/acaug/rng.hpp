#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace acaug {

/// SplitMix64 output finalizer.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Explicit random stream passed by reference into every stochastic
/// operation. Uniform draws are derived from raw engine words so that the
/// sequence is identical across standard library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi]; returns exactly lo when lo == hi.
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  /// Uniform integer in [lo, hi] inclusive.
  std::size_t integer(std::size_t lo, std::size_t hi) { return lo + index(hi - lo + 1); }

  double normal() {
    // Box-Muller; 1 - u keeps the log argument away from zero.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Gamma(shape, 1) via Marsaglia-Tsang, with the u^(1/a) boost for a < 1.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(1.0 - uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = 1.0 - uniform();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    const double s = x + y;
    return s > 0.0 ? x / s : 0.5;
  }

 private:
  std::mt19937_64 engine_;
};

/// Per-(entry, copy) seed. Depends only on its three inputs, never on
/// processing order. The id is absorbed as length-prefixed little-endian
/// 8-byte words.
inline std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view entry_id,
                                 std::uint64_t copy_index) noexcept {
  constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state = splitmix64_mix(global_seed + kGolden);
  std::uint64_t counter = 1;
  auto absorb = [&](std::uint64_t word) {
    state = splitmix64_mix(state ^ splitmix64_mix(word + kGolden * counter++));
  };
  absorb(static_cast<std::uint64_t>(entry_id.size()));
  for (std::size_t i = 0; i < entry_id.size(); i += 8) {
    std::uint64_t word = 0;
    for (std::size_t b = 0; b < 8 && i + b < entry_id.size(); ++b) {
      word |= static_cast<std::uint64_t>(static_cast<unsigned char>(entry_id[i + b])) << (8 * b);
    }
    absorb(word);
  }
  absorb(copy_index);
  return state;
}

}  // namespace acaug
