#pragma once
// spectral.hpp — transforms, linear operators, and norms on periodic fields.
//
// Conventions (fixed project-wide):
//   * A Spectrum holds coefficients c_k of f(x) = sum_k c_k e^{i xi_k x},
//     xi_k = pi k / L, in FFT index order (k = 0..n/2, then negative).
//     The forward transform divides by n, so for f = cos(xi_k x) the
//     amplitudes are c_{+-k} = 1/2 exactly up to rounding.
//   * Real fields give Hermitian spectra; every operator below uses a
//     Hermitian-symmetric multiplier, so outputs are real by construction
//     and we materialize the real part only.
//   * Mode 0 is annihilated by all homogeneous operators; the Nyquist mode
//     k = n/2 is zeroed in every operator application (odd multipliers
//     such as sgn(xi) and i*xi have no consistent value there).

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "cfks/field.hpp"
#include "cfks/grid.hpp"

namespace cfks {

using Spectrum = std::vector<cplx>;

// --- transforms -------------------------------------------------------------

// The sample points start at x_0 = -L, so array index j maps to phase
// e^{i xi_k x_j} = (-1)^k e^{2 pi i jk / n}; the (-1)^k is folded here.
inline Spectrum to_spectrum(const Field& f) {
  const Grid& g = f.grid;
  std::size_t n = static_cast<std::size_t>(g.n());
  Spectrum s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = cplx{f.values[j], 0.0};
  g.plan().forward(s);
  double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sign = (i % 2 == 0) ? 1.0 : -1.0;  // (-1)^k has the parity of i
    s[i] *= sign * inv_n;
  }
  return s;
}

inline Field to_field(const Grid& g, Spectrum s) {
  std::size_t n = static_cast<std::size_t>(g.n());
  if (s.size() != n) throw std::invalid_argument("to_field: spectrum/grid size mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (i % 2 == 1) s[i] = -s[i];
  g.plan().backward(s);
  Field f(g);
  for (std::size_t j = 0; j < n; ++j) f.values[j] = s[j].real();
  return f;
}

// --- multiplier helpers ------------------------------------------------------

namespace detail {

// Applies a spectral multiplier in place, zeroing the Nyquist mode.
template <typename Fn>
inline void apply_multiplier(const Grid& g, Spectrum& s, Fn&& mult) {
  int n = g.n();
  for (int i = 0; i < n; ++i) {
    int k = g.mode_of(i);
    if (std::abs(k) == n / 2) {
      s[static_cast<std::size_t>(i)] = cplx{0.0, 0.0};
    } else {
      s[static_cast<std::size_t>(i)] *= mult(k, g.wavenumber(i));
    }
  }
}

}  // namespace detail

// --- linear operators ---------------------------------------------------------

// Fractional Laplacian Lambda^a: multiplier |xi_k|^a, mode 0 annihilated.
inline Spectrum fractional_laplacian(const Grid& g, Spectrum s, double a) {
  if (!(a > 0.0) || a > 2.0)
    throw std::invalid_argument("fractional_laplacian: exponent must lie in (0, 2]");
  detail::apply_multiplier(g, s, [a](int k, double xi) {
    return k == 0 ? cplx{0.0, 0.0} : cplx{std::pow(std::abs(xi), a), 0.0};
  });
  return s;
}

inline Field fractional_laplacian(const Field& f, double a) {
  return to_field(f.grid, fractional_laplacian(f.grid, to_spectrum(f), a));
}

// Hilbert transform: multiplier -i sgn(xi_k), so that Lambda = d/dx H.
inline Spectrum hilbert(const Grid& g, Spectrum s) {
  detail::apply_multiplier(g, s, [](int k, double) {
    if (k == 0) return cplx{0.0, 0.0};
    return k > 0 ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
  });
  return s;
}

inline Field hilbert(const Field& f) { return to_field(f.grid, hilbert(f.grid, to_spectrum(f))); }

// Spatial derivative: multiplier i xi_k.
inline Spectrum derivative(const Grid& g, Spectrum s) {
  detail::apply_multiplier(g, s, [](int, double xi) { return cplx{0.0, xi}; });
  return s;
}

inline Field derivative(const Field& f) {
  return to_field(f.grid, derivative(f.grid, to_spectrum(f)));
}

// Zero-mean antiderivative: multiplier 1/(i xi_k), mode 0 -> 0. Inverse of
// `derivative` on zero-mean fields; the integration constant is fixed by
// the zero-mean normalization.
inline Spectrum antiderivative(const Grid& g, Spectrum s) {
  detail::apply_multiplier(g, s, [](int k, double xi) {
    return k == 0 ? cplx{0.0, 0.0} : cplx{0.0, -1.0 / xi};
  });
  return s;
}

inline Field antiderivative(const Field& f) {
  return to_field(f.grid, antiderivative(f.grid, to_spectrum(f)));
}

// Solves -v'' = g with zero mean. The torus Poisson problem is solvable
// only for zero-mean right sides, checked to 1e-10 relative.
inline Spectrum solve_poisson_zero_mean(const Grid& g, Spectrum s) {
  double scale = 0.0;
  for (const cplx& c : s) scale = std::max(scale, std::abs(c));
  if (std::abs(s[0]) > 1e-10 * (1.0 + scale))
    throw std::invalid_argument(
        "solve_poisson_zero_mean: right side must have zero mean on the torus");
  detail::apply_multiplier(g, s, [](int k, double xi) {
    return k == 0 ? cplx{0.0, 0.0} : cplx{1.0 / (xi * xi), 0.0};
  });
  return s;
}

inline Field solve_poisson_zero_mean(const Field& f) {
  double scale = 1.0 + sup_norm(f);
  if (std::abs(mean(f)) > 1e-10 * scale)
    throw std::invalid_argument(
        "solve_poisson_zero_mean: right side must have zero mean on the torus");
  Spectrum s = to_spectrum(f);
  s[0] = cplx{0.0, 0.0};
  return to_field(f.grid, solve_poisson_zero_mean(f.grid, std::move(s)));
}

// 2/3-rule dealiasing: zeroes all modes with 3|k| > n.
inline Spectrum dealias(const Grid& g, Spectrum s) {
  int n = g.n();
  for (int i = 0; i < n; ++i) {
    int k = g.mode_of(i);
    if (3 * std::abs(k) > n) s[static_cast<std::size_t>(i)] = cplx{0.0, 0.0};
  }
  return s;
}

inline Field dealias(const Field& f) { return to_field(f.grid, dealias(f.grid, to_spectrum(f))); }

// --- kernel quadrature cross-check of Lambda ---------------------------------

// Half-Laplacian through the periodic sin^2 kernel (valid for L = pi):
//   Lambda f(x) = (1/4pi) P.V. int_{-pi}^{pi} (f(x) - f(x-y)) / sin^2(y/2) dy.
// The 1/(4pi) normalization is what periodizing the real-line kernel
// (1/pi)|.|^{-2} produces (the image sum of 1/(y - 2 pi g)^2 equals
// 1/(4 sin^2(y/2))); it is the constant consistent with the Fourier symbol
// |xi|, and eigenfunction tests pin it. Samples at +-y are paired, so the
// integrand becomes the second symmetric difference
// 2f(x) - f(x-y) - f(x+y), which is O(y^2) and cancels the singularity.
// The midpoint rule over the period is spectrally accurate; shifted samples
// f(x +- y) come from modulating the spectrum (exact for band-limited f).
inline Field lambda_kernel_quadrature(const Field& f, int n_quad) {
  const Grid& g = f.grid;
  if (std::abs(g.half_length() - detail::kPi) > 1e-12 * detail::kPi)
    throw std::invalid_argument(
        "lambda_kernel_quadrature: sin^2 kernel form requires half_length = pi");
  if (n_quad < 4 * g.n())
    throw std::invalid_argument("lambda_kernel_quadrature: n_quad must be >= 4n");
  std::size_t n = static_cast<std::size_t>(g.n());
  Spectrum s = to_spectrum(f);
  Field out(g);
  double w = detail::kPi / static_cast<double>(n_quad);
  Spectrum shifted(n);
  for (int q = 0; q < n_quad; ++q) {
    double y = (q + 0.5) * detail::kPi / static_cast<double>(n_quad);
    for (std::size_t i = 0; i < n; ++i)
      shifted[i] = s[i] * (2.0 * std::cos(g.wavenumber(static_cast<int>(i)) * y));
    Field pair = to_field(g, shifted);  // f(x+y) + f(x-y)
    double kernel = w / (4.0 * detail::kPi) / (std::sin(y / 2.0) * std::sin(y / 2.0));
    for (std::size_t j = 0; j < n; ++j)
      out.values[j] += kernel * (2.0 * f.values[j] - pair.values[j]);
  }
  return out;
}

// --- random band-limited fields ---------------------------------------------------

namespace detail {

// Uniform in [-1, 1] from the raw engine stream; bit-reproducible across
// standard libraries (std::uniform_real_distribution is not).
inline double uniform_pm1(std::mt19937_64& rng) {
  return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace detail

// Seeded zero-mean trigonometric polynomial with modes 1..band_limit and
// per-mode amplitudes ~ amplitude/k.
inline Field random_band_limited(const Grid& g, int band_limit, std::uint64_t seed,
                                 double amplitude = 1.0) {
  if (band_limit < 1 || 3 * band_limit > g.n())
    throw std::invalid_argument("random_band_limited: band_limit must lie in [1, n/3]");
  std::mt19937_64 rng(seed);
  std::vector<double> ac(static_cast<std::size_t>(band_limit) + 1);
  std::vector<double> as(static_cast<std::size_t>(band_limit) + 1);
  for (int k = 1; k <= band_limit; ++k) {
    ac[static_cast<std::size_t>(k)] = amplitude * detail::uniform_pm1(rng) / k;
    as[static_cast<std::size_t>(k)] = amplitude * detail::uniform_pm1(rng) / k;
  }
  Field f(g);
  for (int j = 0; j < g.n(); ++j) {
    double x = g.points()[static_cast<std::size_t>(j)];
    double v = 0.0;
    for (int k = 1; k <= band_limit; ++k) {
      double xi = g.wavenumber(k);
      v += ac[static_cast<std::size_t>(k)] * std::cos(xi * x) +
           as[static_cast<std::size_t>(k)] * std::sin(xi * x);
    }
    f.values[static_cast<std::size_t>(j)] = v;
  }
  return f;
}

// --- norms ---------------------------------------------------------------------

struct NormSet {
  double l2 = 0.0;            // (int |f|^2)^(1/2), rectangle rule
  double sup = 0.0;           // max |values|
  double l4 = 0.0;            // (int |f|^4)^(1/4)
  double h_half_homog = 0.0;  // |Lambda^(1/2) f|_0, spectral
  std::vector<double> s_list;
  std::vector<double> h_s;    // full norms (|f|_0^2 + |Lambda^s f|_0^2)^(1/2)
};

// Homogeneous |Lambda^s f|_0 from a spectrum (Parseval: int |f|^2 = 2L sum |c_k|^2).
inline double homogeneous_norm(const Grid& g, const Spectrum& s, double order) {
  double acc = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    int k = g.mode_of(i);
    if (k == 0 || std::abs(k) == g.n() / 2) continue;
    double xi = std::abs(g.wavenumber(i));
    double a = std::abs(s[static_cast<std::size_t>(i)]);
    acc += std::pow(xi, 2.0 * order) * a * a;
  }
  return std::sqrt(2.0 * g.half_length() * acc);
}

inline double l2_norm_spectral(const Grid& g, const Spectrum& s) {
  double acc = 0.0;
  for (const cplx& c : s) acc += std::norm(c);
  return std::sqrt(2.0 * g.half_length() * acc);
}

inline NormSet norms(const Field& f, const std::vector<double>& s_list = {}) {
  const Grid& g = f.grid;
  NormSet out;
  double dx = g.dx();
  double acc2 = 0.0, acc4 = 0.0;
  for (double v : f.values) {
    acc2 += v * v;
    acc4 += v * v * v * v;
    out.sup = std::max(out.sup, std::abs(v));
  }
  out.l2 = std::sqrt(acc2 * dx);
  out.l4 = std::pow(acc4 * dx, 0.25);
  Spectrum s = to_spectrum(f);
  out.h_half_homog = homogeneous_norm(g, s, 0.5);
  double l2s = l2_norm_spectral(g, s);
  out.s_list = s_list;
  out.h_s.reserve(s_list.size());
  for (double order : s_list) {
    double homog = homogeneous_norm(g, s, order);
    out.h_s.push_back(std::sqrt(l2s * l2s + homog * homog));
  }
  return out;
}

}  // namespace cfks
