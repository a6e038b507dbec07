#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "acaug/error.hpp"

namespace acaug {

using Complex = std::complex<double>;

/// Mixed-radix decimation-in-time FFT for any length. Lengths are factored
/// into 4s, 2s, 3s, 5s and then remaining primes; prime radices use a
/// generic O(p^2) butterfly, so highly composite lengths (400, 2048) are fast.
/// A plan is immutable after construction and safe to share across threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw Error("fft: length must be positive");
    twiddles_.resize(n);
    constexpr double kTwoPi = 6.28318530717958647692;
    for (std::size_t i = 0; i < n; ++i) {
      twiddles_[i] = std::polar(1.0, -kTwoPi * static_cast<double>(i) / static_cast<double>(n));
    }
    std::size_t rest = n;
    for (std::size_t p : {4, 2, 3, 5}) {
      while (rest % p == 0) {
        factors_.push_back(p);
        rest /= p;
      }
    }
    for (std::size_t p = 7; p * p <= rest; p += 2) {
      while (rest % p == 0) {
        factors_.push_back(p);
        rest /= p;
      }
    }
    if (rest > 1) factors_.push_back(rest);
  }

  std::size_t size() const noexcept { return n_; }

  /// Forward transform, X[k] = sum_t x[t] e^{-2 pi i k t / n}.
  void forward(std::span<const Complex> in, std::span<Complex> out) const {
    check(in, out);
    if (factors_.empty()) {
      out[0] = in[0];
      return;
    }
    std::vector<Complex> scratch(factors_.empty() ? 1 : max_factor());
    work(out.data(), in.data(), 1, 0, n_, scratch);
  }

  std::vector<Complex> forward(std::span<const Complex> in) const {
    std::vector<Complex> out(n_);
    forward(in, out);
    return out;
  }

  /// Inverse transform scaled by 1/n.
  std::vector<Complex> inverse(std::span<const Complex> in) const {
    std::vector<Complex> conj_in(in.begin(), in.end());
    for (auto& c : conj_in) c = std::conj(c);
    auto out = forward(conj_in);
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& c : out) c = std::conj(c) * scale;
    return out;
  }

 private:
  void check(std::span<const Complex> in, std::span<Complex> out) const {
    if (in.size() != n_ || out.size() != n_) throw Error("fft: buffer size does not match plan");
  }

  std::size_t max_factor() const {
    std::size_t m = 1;
    for (auto f : factors_) m = f > m ? f : m;
    return m;
  }

  // Writes the length-`len` DFT of in[0], in[stride], ... into out[0..len).
  void work(Complex* out, const Complex* in, std::size_t stride, std::size_t depth, std::size_t len,
            std::vector<Complex>& scratch) const {
    const std::size_t p = factors_[depth];
    const std::size_t m = len / p;
    if (m == 1) {
      for (std::size_t q = 0; q < p; ++q) out[q] = in[q * stride];
    } else {
      for (std::size_t q = 0; q < p; ++q) {
        work(out + q * m, in + q * stride, stride * p, depth + 1, m, scratch);
      }
    }
    // Twiddle step: index stride of this stage in the full-length table.
    const std::size_t tw_step = stride;
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t q = 0; q < p; ++q) {
        scratch[q] = out[u + q * m] * twiddles_[(q * u * tw_step) % n_];
      }
      for (std::size_t k = 0; k < p; ++k) {
        Complex acc = scratch[0];
        const std::size_t base = (k * m * tw_step) % n_;
        for (std::size_t q = 1; q < p; ++q) {
          acc += scratch[q] * twiddles_[(q * base) % n_];
        }
        out[u + k * m] = acc;
      }
    }
  }

  std::size_t n_;
  std::vector<Complex> twiddles_;
  std::vector<std::size_t> factors_;
};

}  // namespace acaug
