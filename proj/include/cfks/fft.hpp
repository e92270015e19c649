#pragma once
// fft.hpp — complex FFT used by the spectral layer.
//
// Two paths: an iterative radix-2 transform for power-of-two sizes and a
// Bluestein chirp-z fallback for general even sizes. Twiddle and chirp
// tables are owned by FftPlan, so repeated transforms on one grid do no
// trig work.
//
// Butterflies run in long double. Mode-level rounding junk of a double
// transform (~1 ulp of the peak coefficient) is amplified by |xi|^2 under
// second-order multipliers, which alone would eat the 1e-12 operator
// exactness budget at n = 256; the extended-precision core keeps junk
// three digits below that. Sizes here are small, so the cost is noise.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace cfks {

using cplx = std::complex<double>;

namespace detail {

constexpr double kPi = 3.14159265358979323846;
constexpr long double kPiL = 3.14159265358979323846264338327950288L;

using lcplx = std::complex<long double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Tables for a fixed power-of-two size: bit-reversal permutation and
// forward twiddles e^{-2 pi i j / n}.
struct Pow2Tables {
  std::size_t n = 0;
  std::vector<std::size_t> bitrev;
  std::vector<lcplx> twiddle;  // twiddle[j] = exp(-2 pi i j / n), j < n/2

  explicit Pow2Tables(std::size_t size) : n(size) {
    bitrev.resize(n);
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < log2n; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
      bitrev[i] = r;
    }
    twiddle.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
      long double ang = -2.0L * kPiL * static_cast<long double>(j) / static_cast<long double>(n);
      twiddle[j] = {std::cos(ang), std::sin(ang)};
    }
  }

  // In-place unnormalized forward DFT: X_k = sum_j x_j e^{-2 pi i jk/n}.
  void forward(lcplx* x) const {
    for (std::size_t i = 0; i < n; ++i)
      if (bitrev[i] > i) std::swap(x[i], x[bitrev[i]]);
    for (std::size_t len = 2; len <= n; len <<= 1) {
      std::size_t stride = n / len;
      for (std::size_t start = 0; start < n; start += len) {
        for (std::size_t j = 0; j < len / 2; ++j) {
          lcplx w = twiddle[j * stride];
          lcplx u = x[start + j];
          lcplx v = x[start + j + len / 2] * w;
          x[start + j] = u + v;
          x[start + j + len / 2] = u - v;
        }
      }
    }
  }
};

}  // namespace detail

// FFT plan for a fixed transform size. Immutable after construction and
// safe to share across threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("FftPlan: size must be positive");
    if (detail::is_pow2(n)) {
      pow2_ = std::make_unique<detail::Pow2Tables>(n);
    } else {
      // Bluestein: X_k = c_k * sum_j (x_j c_j) conj(c_{k-j}),
      // c_j = e^{-i pi j^2 / n}; the convolution runs on a padded
      // power-of-two grid. j^2 is reduced mod 2n in exact integer
      // arithmetic before the trig call.
      m_ = detail::next_pow2(2 * n - 1);
      conv_ = std::make_unique<detail::Pow2Tables>(m_);
      chirp_.resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        std::int64_t q = (static_cast<std::int64_t>(j) * static_cast<std::int64_t>(j)) %
                         (2 * static_cast<std::int64_t>(n));
        long double ang = -detail::kPiL * static_cast<long double>(q) / static_cast<long double>(n);
        chirp_[j] = {std::cos(ang), std::sin(ang)};
      }
      std::vector<detail::lcplx> b(m_, detail::lcplx{0.0L, 0.0L});
      b[0] = std::conj(chirp_[0]);
      for (std::size_t j = 1; j < n; ++j) {
        b[j] = std::conj(chirp_[j]);
        b[m_ - j] = b[j];
      }
      conv_->forward(b.data());
      bhat_ = std::move(b);
    }
  }

  std::size_t size() const { return n_; }

  // Unnormalized forward DFT, in place: X_k = sum_j x_j e^{-2 pi i jk/n}.
  void forward(std::vector<cplx>& x) const {
    if (x.size() != n_) throw std::invalid_argument("FftPlan::forward: size mismatch");
    std::vector<detail::lcplx> w(n_);
    for (std::size_t j = 0; j < n_; ++j) w[j] = detail::lcplx{x[j].real(), x[j].imag()};
    forward_ld(w);
    for (std::size_t j = 0; j < n_; ++j)
      x[j] = cplx{static_cast<double>(w[j].real()), static_cast<double>(w[j].imag())};
  }

  // Unnormalized backward DFT, in place: x_j = sum_k X_k e^{+2 pi i jk/n}.
  void backward(std::vector<cplx>& x) const {
    for (auto& v : x) v = std::conj(v);
    forward(x);
    for (auto& v : x) v = std::conj(v);
  }

 private:
  void forward_ld(std::vector<detail::lcplx>& x) const {
    if (pow2_) {
      pow2_->forward(x.data());
      return;
    }
    std::vector<detail::lcplx> a(m_, detail::lcplx{0.0L, 0.0L});
    for (std::size_t j = 0; j < n_; ++j) a[j] = x[j] * chirp_[j];
    conv_->forward(a.data());
    for (std::size_t j = 0; j < m_; ++j) a[j] *= bhat_[j];
    // Inverse convolution FFT via conjugation, normalized by m.
    for (auto& v : a) v = std::conj(v);
    conv_->forward(a.data());
    long double inv_m = 1.0L / static_cast<long double>(m_);
    for (std::size_t k = 0; k < n_; ++k) x[k] = std::conj(a[k]) * inv_m * chirp_[k];
  }

  std::size_t n_ = 0;
  std::unique_ptr<detail::Pow2Tables> pow2_;
  // Bluestein state (general sizes only).
  std::size_t m_ = 0;
  std::unique_ptr<detail::Pow2Tables> conv_;
  std::vector<detail::lcplx> chirp_;
  std::vector<detail::lcplx> bhat_;
};

}  // namespace cfks
