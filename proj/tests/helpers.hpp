#pragma once
// Shared test utilities: oracles and field builders.

#include <cmath>
#include <complex>
#include <vector>

#include "cfks/spectral.hpp"

namespace testutil {

inline constexpr double kPi = 3.14159265358979323846;

inline double rel_err(double got, double expect) {
  return std::abs(got - expect) / std::max(1e-300, std::abs(expect));
}

// Brute-force DFT, the oracle for the FFT: X_k = sum_j x_j e^{-2 pi i jk/n}.
inline std::vector<cfks::cplx> naive_dft(const std::vector<cfks::cplx>& x) {
  std::size_t n = x.size();
  std::vector<cfks::cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cfks::cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      double ang = -2.0 * kPi * static_cast<double>(j * k % n) / static_cast<double>(n);
      acc += x[j] * cfks::cplx{std::cos(ang), std::sin(ang)};
    }
    out[k] = acc;
  }
  return out;
}

inline cfks::Field cos_mode(const cfks::Grid& g, int k, double amp = 1.0) {
  double xi = g.wavenumber(k);
  return cfks::make_field(g, [=](double x) { return amp * std::cos(xi * x); });
}

inline cfks::Field sin_mode(const cfks::Grid& g, int k, double amp = 1.0) {
  double xi = g.wavenumber(k);
  return cfks::make_field(g, [=](double x) { return amp * std::sin(xi * x); });
}

}  // namespace testutil
