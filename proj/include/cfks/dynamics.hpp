#pragma once
// dynamics.hpp — right-hand sides for the three evolution models.
//
// Models on the torus [-L, L]:
//   KELLER_SEGEL  du/dt = -Lambda^a u - chi d/dx(u dv/dx),  -v'' = u - m, v zero-mean
//   BURGERS       dZ/dt = -Lambda^a Z + f(t) Z dZ/dx,       f(t) = chi e^{chi m t}
//   W_EQUATION    dW/dt = -Lambda^a W + chi W dW/dx + chi m W
//
// All quadratic terms are evaluated pseudospectrally in conservative form
// (perfect x-derivatives of dealiased products), so mode 0 of every
// right-hand side vanishes identically and the mean is conserved exactly.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfks/spectral.hpp"

namespace cfks {

enum class Model { KellerSegel, Burgers, WEquation };

inline std::string model_name(Model m) {
  switch (m) {
    case Model::KellerSegel: return "keller_segel";
    case Model::Burgers: return "burgers";
    case Model::WEquation: return "w_equation";
  }
  return "?";
}

struct ModelParams {
  double alpha_diff = 1.0;  // fractional diffusion exponent, (0, 2]
  double chi = 1.0;         // chemotactic sensitivity, > 0
  double mass = 0.0;        // mean mass m, >= 0
  Model model = Model::Burgers;

  // chi = 0 is admitted as the degenerate pure-diffusion case; it is the
  // exact linear oracle several tests are built on.
  void validate() const {
    if (!(alpha_diff > 0.0) || alpha_diff > 2.0)
      throw std::invalid_argument("ModelParams: alpha_diff must lie in (0, 2]");
    if (!(chi >= 0.0)) throw std::invalid_argument("ModelParams: chi must be >= 0");
    if (!(mass >= 0.0)) throw std::invalid_argument("ModelParams: mass must be >= 0");
  }
};

struct State {
  Field field;
  double time = 0.0;
};

// f(t) = chi e^{chi m t}, the coefficient of the reduced Burgers transport.
inline double f_of_t(double t, double chi, double mass) {
  return chi * std::exp(chi * mass * t);
}

namespace detail {

inline void require_mean(const Field& f, double target, double tol, const char* who) {
  if (std::abs(mean(f) - target) > tol * (1.0 + std::abs(target)))
    throw std::invalid_argument(std::string(who) + ": field mean does not match the model");
}

// Pointwise product of two spectra, dealiased: fft(ifft(a).ifft(b)) with the
// 2/3 rule applied to the result.
inline Spectrum dealiased_product(const Grid& g, const Spectrum& a, const Spectrum& b) {
  Field fa = to_field(g, a);
  Field fb = to_field(g, b);
  for (std::size_t j = 0; j < fa.values.size(); ++j) fa.values[j] *= fb.values[j];
  return dealias(g, to_spectrum(fa));
}

}  // namespace detail

// Per-mode symbol of the stiff linear part handled exactly by the stepper:
// -|xi_k|^a, plus +chi m for the W equation.
inline std::vector<double> linear_symbol(const Grid& g, const ModelParams& p) {
  std::vector<double> sym(static_cast<std::size_t>(g.n()));
  double shift = p.model == Model::WEquation ? p.chi * p.mass : 0.0;
  for (int i = 0; i < g.n(); ++i)
    sym[static_cast<std::size_t>(i)] =
        -std::pow(std::abs(g.wavenumber(i)), p.alpha_diff) + shift;
  return sym;
}

// Non-stiff remainder N(state, t) with the linear symbol split off; always a
// perfect derivative, so its mode 0 is exactly zero.
inline Spectrum nonlinear_rhs(const Grid& g, const Spectrum& state, double t,
                              const ModelParams& p) {
  switch (p.model) {
    case Model::KellerSegel: {
      // -chi d/dx(u dv/dx); the Poisson source u - m is the spectrum with
      // mode 0 removed.
      Spectrum src = state;
      src[0] = cplx{0.0, 0.0};
      Spectrum dv = derivative(g, solve_poisson_zero_mean(g, std::move(src)));
      Spectrum flux = detail::dealiased_product(g, state, dv);
      flux = derivative(g, std::move(flux));
      for (cplx& c : flux) c *= -p.chi;
      return flux;
    }
    case Model::Burgers: {
      Spectrum sq = detail::dealiased_product(g, state, state);
      sq = derivative(g, std::move(sq));
      double c = 0.5 * f_of_t(t, p.chi, p.mass);
      for (cplx& v : sq) v *= c;
      return sq;
    }
    case Model::WEquation: {
      Spectrum sq = detail::dealiased_product(g, state, state);
      sq = derivative(g, std::move(sq));
      double c = 0.5 * p.chi;
      for (cplx& v : sq) v *= c;
      return sq;
    }
  }
  throw std::logic_error("nonlinear_rhs: unknown model");
}

namespace detail {

inline Field full_rhs(const Field& f, double t, const ModelParams& p) {
  Spectrum s = to_spectrum(f);
  Spectrum out = nonlinear_rhs(f.grid, s, t, p);
  std::vector<double> sym = linear_symbol(f.grid, p);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += sym[i] * s[i];
  // The symbol shift acts on mode 0 too; for the W equation the state is
  // zero-mean so the contribution vanishes, but remove rounding residue.
  out[0] = cplx{s[0].real() * (p.model == Model::WEquation ? p.chi * p.mass : 0.0), 0.0};
  return to_field(f.grid, std::move(out));
}

}  // namespace detail

// du/dt for the Keller-Segel model. Requires mean(u) = m to 1e-8 relative.
inline Field ks_rhs(const Field& u, const ModelParams& p) {
  p.validate();
  detail::require_mean(u, p.mass, 1e-8, "ks_rhs");
  ModelParams q = p;
  q.model = Model::KellerSegel;
  Field out = detail::full_rhs(u, 0.0, q);
  return out;
}

// dZ/dt for the modified Burgers model at time t. Requires zero-mean Z.
inline Field burgers_rhs(const Field& Z, double t, const ModelParams& p) {
  p.validate();
  detail::require_mean(Z, 0.0, 1e-10, "burgers_rhs");
  ModelParams q = p;
  q.model = Model::Burgers;
  return detail::full_rhs(Z, t, q);
}

// dW/dt for the W equation. Requires zero-mean W.
inline Field w_rhs(const Field& W, const ModelParams& p) {
  p.validate();
  detail::require_mean(W, 0.0, 1e-10, "w_rhs");
  ModelParams q = p;
  q.model = Model::WEquation;
  return detail::full_rhs(W, 0.0, q);
}

}  // namespace cfks
