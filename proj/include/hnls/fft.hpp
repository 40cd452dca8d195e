#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hnls {

using cplx = std::complex<double>;

/// Radix-2 iterative FFT for power-of-two sizes. Tables (bit-reversal
/// permutation and twiddle factors) are built once per size and shared
/// immutably, so a plan may be used from several threads at once.
/// Transforms are unnormalized: forward computes sum_j a_j e^{-2pi i jk/n},
/// inverse the conjugate sum without the 1/n factor.
class FftPlan {
public:
  explicit FftPlan(std::size_t n) : n_(n) {
    if (n < 2 || (n & (n - 1)) != 0)
      throw std::invalid_argument("FftPlan: size must be a power of two >= 2");
    bitrev_.resize(n);
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < log2n; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
      bitrev_[i] = static_cast<std::uint32_t>(r);
    }
    twiddle_.resize(n / 2);
    const double step = -2.0 * pi() / static_cast<double>(n);
    for (std::size_t j = 0; j < n / 2; ++j)
      twiddle_[j] = std::polar(1.0, step * static_cast<double>(j));
  }

  std::size_t size() const { return n_; }

  void forward(cplx* a) const { transform(a, false); }
  void inverse(cplx* a) const { transform(a, true); }

  static constexpr double pi() { return 3.141592653589793238462643383279502884; }

private:
  void transform(cplx* a, bool inverse) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t r = bitrev_[i];
      if (i < r) std::swap(a[i], a[r]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len >> 1;
      const std::size_t wstep = n_ / len;
      for (std::size_t base = 0; base < n_; base += len) {
        for (std::size_t j = 0; j < half; ++j) {
          cplx w = twiddle_[j * wstep];
          if (inverse) w = std::conj(w);
          const cplx t = a[base + j + half] * w;
          a[base + j + half] = a[base + j] - t;
          a[base + j] += t;
        }
      }
    }
  }

  std::size_t n_;
  std::vector<std::uint32_t> bitrev_;
  std::vector<cplx> twiddle_;
};

}  // namespace hnls
