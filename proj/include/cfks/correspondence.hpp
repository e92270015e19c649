#pragma once
// correspondence.hpp — the dictionary between the Keller-Segel system and
// its Burgers reduction.
//
// The chain, for mean mass m and f(t) = chi e^{chi m t}:
//   Z(0) = zero-mean antiderivative of u_0 - m
//   W(t) = e^{chi m t} Z(t)
//   u    = dW/dx + m
//   v    = d/dx V with -V'' = W, recentred to zero mean; then dv/dx = -W.
// Evolving u under Keller-Segel and Z under the reduced Burgers equation
// commutes with this dictionary; roundtrip_error measures the discrepancy
// of the two numerical routes.

#include <cmath>
#include <stdexcept>

#include "cfks/dynamics.hpp"
#include "cfks/spectral.hpp"
#include "cfks/stepper.hpp"

namespace cfks {

// Z0 from u0: the zero-mean periodic primitive of u0 - m, computed
// spectrally (division by i xi on the nonzero modes absorbs the paper's
// integration constant). Requires mean(u0) = m, else the primitive would
// not be periodic.
inline Field primitive_datum(const Field& u0, const ModelParams& p) {
  if (std::abs(mean(u0) - p.mass) > 1e-8 * (1.0 + std::abs(p.mass)))
    throw std::invalid_argument("primitive_datum: mean(u0) must equal the mean mass m");
  return antiderivative(u0);  // mode 0 (= m) is annihilated by the antiderivative
}

inline Field z_to_w(const Field& Z, double t, const ModelParams& p) {
  Field W = Z;
  W *= std::exp(p.chi * p.mass * t);
  return W;
}

inline Field w_to_u(const Field& W, const ModelParams& p) {
  Field u = derivative(W);
  for (double& v : u.values) v += p.mass;
  return u;
}

// v = d/dx(Poisson^{-1} W), recentred to zero mean; satisfies dv/dx = -W
// and -v'' = u - m for u = w_to_u(W).
inline Field recover_v(const Field& W) {
  Field v = derivative(solve_poisson_zero_mean(W));
  double c = mean(v);
  for (double& x : v.values) x -= c;
  return v;
}

// Everything the chain promises about one (u, v, Z, W) snapshot.
struct CorrespondencePack {
  Field u, v, Z, W;
  double t = 0.0;
  ModelParams params;
};

inline CorrespondencePack make_pack(const Field& Z, double t, const ModelParams& p) {
  CorrespondencePack pack;
  pack.Z = Z;
  pack.W = z_to_w(Z, t, p);
  pack.u = w_to_u(pack.W, p);
  pack.v = recover_v(pack.W);
  pack.t = t;
  pack.params = p;
  return pack;
}

// Integrates (A) u directly under Keller-Segel and (B) Z under the reduced
// Burgers equation, maps B back through the dictionary at t_end, and
// returns |u_A - u_B|_inf. Stated for the critical exponent only: the
// reduction is derived for Lambda^1.
inline double roundtrip_error(const Field& u0, const ModelParams& p, const StepperConfig& cfg) {
  if (p.alpha_diff != 1.0)
    throw std::invalid_argument("roundtrip_error: the reduction holds for alpha_diff = 1");
  ModelParams pa = p;
  pa.model = Model::KellerSegel;
  State sa{u0, 0.0};
  RunReport ra = integrate(sa, pa, cfg);
  if (ra.status != RunStatus::Ok)
    throw std::runtime_error("roundtrip_error: Keller-Segel run ended " + status_name(ra.status));

  ModelParams pb = p;
  pb.model = Model::Burgers;
  State sb{primitive_datum(u0, p), 0.0};
  RunReport rb = integrate(sb, pb, cfg);
  if (rb.status != RunStatus::Ok)
    throw std::runtime_error("roundtrip_error: Burgers run ended " + status_name(rb.status));

  Field u_b = w_to_u(z_to_w(sb.field, sb.time, p), p);
  return max_abs_diff(sa.field, u_b);
}

}  // namespace cfks
