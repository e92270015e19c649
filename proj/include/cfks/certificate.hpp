#pragma once
// certificate.hpp — moduli of continuity and the explicit certificate recipe.
//
// The two-branch family with parameters K, B, xi0:
//
//   omega(xi) = B xi / (1 + K sqrt(B xi))          xi in [0, xi0)
//             = C ln(B xi),                        xi >= xi0
//   C = B xi0 / ( ln(B xi0) (1 + K sqrt(B xi0)) )  (continuity at xi0)
//
// omega is concave across the spline point iff B xi0 >= e^2. The recipe
//   B xi0 = e^2,  K = 4 pi Gamma e,
//   ln(N e^2) = (1 + 4 pi Gamma e^2) |Z(t0)|_inf   (N clamped to >= 1),
//   B = 2 N |dZ/dx(t0)|_inf (1 + 4 pi Gamma e^2)
// produces a modulus held by Z(t0) that the evolution cannot break.
//
// N and B grow like exp((1 + 4 pi Gamma e^2)|Z|_inf) and overflow doubles
// already for moderate data, so the certificate stores ln N, ln B, ln xi0
// as the primary representation. All evaluations go through the logs; on
// the log branch omega(xi) = C (ln B + ln xi) stays well inside double
// range even when B itself does not.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cfks/dynamics.hpp"
#include "cfks/spectral.hpp"

namespace cfks {

struct ModulusCertificate {
  double K = 0.0;      // small-scale shape parameter
  double a = 0.5;      // concave-branch exponent (the recipe fixes 1/2)
  double Gamma = 1.0;  // sup of f over the certified window
  double C = 0.0;      // log-branch coefficient, from continuity

  double log_B = 0.0;    // ln B;  B = omega'(0)
  double log_N = 0.0;    // ln N;  N >= 1 divides middle/large arguments
  double log_xi0 = 0.0;  // ln xi0; spline point

  double B() const { return std::exp(log_B); }      // +inf if out of range
  double N() const { return std::exp(log_N); }
  double xi0() const { return std::exp(log_xi0); }  // 0 if out of range
};

namespace detail {

inline double continuity_coefficient(double K, double s /* = B xi0 */) {
  return s / (std::log(s) * (1.0 + K * std::sqrt(s)));
}

}  // namespace detail

// Certificate from explicit finite parameters (tests, hand-made moduli).
inline ModulusCertificate make_certificate(double K, double B, double xi0, double a,
                                           double Gamma) {
  if (!(K > 0.0) || !std::isfinite(K))
    throw std::invalid_argument("make_certificate: K must be positive");
  if (!(B > 0.0) || !std::isfinite(B))
    throw std::invalid_argument("make_certificate: B must be positive and finite");
  if (!(xi0 > 0.0) || !std::isfinite(xi0))
    throw std::invalid_argument("make_certificate: xi0 must be positive and finite");
  if (!(a > 0.0) || !(a < 1.0))
    throw std::invalid_argument("make_certificate: a must lie in (0, 1)");
  if (!(Gamma > 0.0)) throw std::invalid_argument("make_certificate: Gamma must be positive");
  double s = B * xi0;
  if (!std::isfinite(s) || !(s > 1.0))
    throw std::invalid_argument("make_certificate: B*xi0 must be finite and > 1");
  ModulusCertificate cert;
  cert.K = K;
  cert.a = a;
  cert.Gamma = Gamma;
  cert.log_B = std::log(B);
  cert.log_N = 0.0;
  cert.log_xi0 = std::log(xi0);
  cert.C = detail::continuity_coefficient(K, s);
  return cert;
}

// omega(xi). The small branch computes B*xi as exp(ln B + ln xi), which is
// bounded by B*xi0 there, so huge B never overflows the evaluation.
inline double modulus_eval(const ModulusCertificate& cert, double xi) {
  if (xi < 0.0) throw std::invalid_argument("modulus_eval: xi must be >= 0");
  if (xi == 0.0) return 0.0;
  double lx = std::log(xi);
  if (lx < cert.log_xi0) {
    double bxi = std::exp(cert.log_B + lx);
    return bxi / (1.0 + cert.K * std::sqrt(bxi));
  }
  return cert.C * (cert.log_B + lx);
}

// Analytic omega'(xi) for xi > 0 (left derivative at the spline point).
inline double modulus_slope(const ModulusCertificate& cert, double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("modulus_slope: xi must be > 0");
  double lx = std::log(xi);
  if (lx < cert.log_xi0) {
    double r = std::sqrt(std::exp(cert.log_B + lx));  // sqrt(B xi)
    double denom = 1.0 + cert.K * r;
    return std::exp(cert.log_B) * (2.0 + cert.K * r) / (2.0 * denom * denom);
  }
  return cert.C / xi;
}

// omega'(0) = B.
inline double modulus_slope_at_zero(const ModulusCertificate& cert) { return cert.B(); }

// Gamma for a run of the reduced Burgers equation on [t0, T]: f is
// nondecreasing for m >= 0, so sup f = f(T).
inline double run_gamma(const ModelParams& p, double t_end) {
  return f_of_t(t_end, p.chi, p.mass);
}

// The recipe. Gamma must cover sup f on the certified window.
inline ModulusCertificate build_certificate(const Field& Z_t0, double Gamma) {
  if (!(Gamma > 0.0)) throw std::invalid_argument("build_certificate: Gamma must be positive");
  if (!is_zero_mean(Z_t0, 1e-10))
    throw std::invalid_argument("build_certificate: Z(t0) must have zero mean");
  double sup_z = sup_norm(Z_t0);
  double sup_dz = sup_norm(derivative(Z_t0));
  if (!(sup_dz > 0.0))
    throw std::invalid_argument("build_certificate: Z(t0) is constant, the recipe needs "
                                "|dZ/dx|_inf > 0");
  const double e1 = std::exp(1.0), e2 = std::exp(2.0);
  double c4 = 1.0 + 4.0 * detail::kPi * Gamma * e2;  // 1 + 4 pi Gamma e^2
  ModulusCertificate cert;
  cert.K = 4.0 * detail::kPi * Gamma * e1;
  cert.a = 0.5;
  cert.Gamma = Gamma;
  cert.log_N = std::max(0.0, c4 * sup_z - 2.0);
  cert.log_B = std::log(2.0) + cert.log_N + std::log(sup_dz) + std::log(c4);
  cert.log_xi0 = 2.0 - cert.log_B;  // B xi0 = e^2 exactly
  cert.C = detail::continuity_coefficient(cert.K, e2);
  return cert;
}

// Signed slack of every sufficient condition. Each margin is positive iff
// its flag is true; the datum margins can be +inf when B is beyond double
// range (the inequality then holds with astronomical slack).
struct ConditionReport {
  bool concavity_ok = false;     // B xi0 >= e^2
  bool small_scale_ok = false;   // K > 2 pi Gamma sqrt(B xi0)
  bool log_scale_ok = false;     // pi Gamma B xi0 < ln(B xi0)(1 + K sqrt(B xi0))
  bool slope_datum_ok = false;   // B/(1 + K sqrt(B xi0)) >= |dZ|_inf
  bool middle_datum_ok = false;  // B/(1 + K sqrt(B xi0)) > N |dZ|_inf
  bool far_datum_ok = false;     // log branch dominates 2|Z|_inf at xi = N xi0

  double margin_concavity = 0.0;
  double margin_small_scale = 0.0;
  double margin_log_scale = 0.0;
  double margin_slope_datum = 0.0;
  double margin_middle_datum = 0.0;
  double margin_far_datum = 0.0;

  bool all_ok() const {
    return concavity_ok && small_scale_ok && log_scale_ok && slope_datum_ok &&
           middle_datum_ok && far_datum_ok;
  }
};

inline ConditionReport check_conditions(const ModulusCertificate& cert, double Gamma,
                                        double sup_z, double sup_dz) {
  ConditionReport r;
  const double ls = cert.log_B + cert.log_xi0;  // ln(B xi0), moderate by design
  const double s = std::exp(ls);
  const double root = std::exp(0.5 * ls);  // sqrt(B xi0)

  r.margin_concavity = s - std::exp(2.0);
  r.concavity_ok = ls >= 2.0;

  r.margin_small_scale = cert.K - 2.0 * detail::kPi * Gamma * root;
  r.small_scale_ok = r.margin_small_scale > 0.0;

  r.margin_log_scale = std::log(s) * (1.0 + cert.K * root) - detail::kPi * Gamma * s;
  r.log_scale_ok = r.margin_log_scale > 0.0;

  // ln of B/(1 + K sqrt(B xi0)); the denominator is moderate even when B
  // is not, so this difference of logs is the stable route.
  double log_denom = std::log1p(cert.K * root);
  double log_slope_lhs = cert.log_B - log_denom;
  r.slope_datum_ok = sup_dz == 0.0 || log_slope_lhs >= std::log(sup_dz);
  r.margin_slope_datum = std::exp(log_slope_lhs) - sup_dz;

  r.middle_datum_ok = sup_dz == 0.0 || log_slope_lhs > cert.log_N + std::log(sup_dz);
  r.margin_middle_datum = std::exp(log_slope_lhs - cert.log_N) - sup_dz;

  // Binding endpoint xi = N xi0 of the far-datum condition (the left side
  // grows in xi, so this is the infimum over xi > N xi0).
  double lhs_far = (s / (1.0 + cert.K * root)) * ((cert.log_N + ls) / ls);
  r.margin_far_datum = lhs_far - 2.0 * sup_z;
  r.far_datum_ok = r.margin_far_datum > 0.0;
  return r;
}

// Literal evaluation of the generic-exponent small-scale condition
//   (1 + K(1-a) xi^a)(pi Gamma xi^(1-a) - K a) < K a^2.
inline bool generic_small_scale_condition(double K, double Gamma, double a, double xi) {
  double left = 1.0 + K * (1.0 - a) * std::pow(xi, a);
  double mid = detail::kPi * Gamma * std::pow(xi, 1.0 - a) - K * a;
  return left * mid < K * a * a;
}

// Two-point violation scan: min over all grid pairs of
// omega(d(x_i, x_j)) - |f_i - f_j| with d the geodesic circle distance.
struct ScanResult {
  double min_margin = std::numeric_limits<double>::infinity();
  int i = 0, j = 0;
};

inline ScanResult scan_violation(const Field& field, const ModulusCertificate& cert) {
  const int n = field.grid.n();
  const double dx = field.grid.dx();
  // On the uniform grid the geodesic distance depends only on the index
  // shift; shifts 1..n/2 enumerate every distance class once.
  std::vector<double> omega_of_shift(static_cast<std::size_t>(n / 2) + 1, 0.0);
  for (int s = 1; s <= n / 2; ++s)
    omega_of_shift[static_cast<std::size_t>(s)] = modulus_eval(cert, s * dx);
  ScanResult best;
  const std::vector<double>& v = field.values;
  for (int s = 1; s <= n / 2; ++s) {
    double om = omega_of_shift[static_cast<std::size_t>(s)];
    for (int i = 0; i < n; ++i) {
      int j = i + s < n ? i + s : i + s - n;
      double margin = om - std::abs(v[static_cast<std::size_t>(i)] -
                                    v[static_cast<std::size_t>(j)]);
      if (margin < best.min_margin) {
        best.min_margin = margin;
        best.i = i;
        best.j = j;
      }
    }
  }
  return best;
}

// |d(field)/dx|_inf < omega'(0) = B (Proposition bound kept by certified fields).
inline bool derivative_bound_check(const Field& field, const ModulusCertificate& cert) {
  return sup_norm(derivative(field)) < cert.B();
}

// Stationary profile of the radially symmetric classical 2-d problem in the
// S variable: S_inf(r) = (4/chi) r / (4/(chi S1) - 1 + r), normalized by
// S_inf(1) = S1. Subcritical masses S1 < 4/chi only.
inline double radial_stationary(double r, double chi, double S1) {
  if (!(chi > 0.0)) throw std::invalid_argument("radial_stationary: chi must be positive");
  if (!(S1 > 0.0) || !(S1 < 4.0 / chi))
    throw std::invalid_argument(
        "radial_stationary: mass must be subcritical (0 < S1 < 4/chi)");
  if (r < 0.0 || r > 1.0)
    throw std::invalid_argument("radial_stationary: r must lie in [0, 1]");
  double offset = 4.0 / (chi * S1) - 1.0;
  return (4.0 / chi) * r / (offset + r);
}

}  // namespace cfks
