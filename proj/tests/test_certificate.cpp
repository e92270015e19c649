#include <catch2/catch_amalgamated.hpp>

#include "cfks/certificate.hpp"
#include "cfks/stepper.hpp"
#include "helpers.hpp"

using namespace cfks;
using testutil::kPi;
using testutil::sin_mode;

namespace {

constexpr double kE = 2.718281828459045235;

}  // namespace

TEST_CASE("modulus family: value, continuity, slope at zero") {
  // Gamma = 1 closed form: B = e^2, xi0 = 1, K = 4 pi e gives
  // C = e^2 / (2 (1 + 4 pi e^2)).
  double K = 4.0 * kPi * kE;
  ModulusCertificate cert = make_certificate(K, kE * kE, 1.0, 0.5, 1.0);
  double expect_C = kE * kE / (2.0 * (1.0 + 4.0 * kPi * kE * kE));
  CHECK(cert.C == Catch::Approx(expect_C).epsilon(1e-13));

  CHECK(modulus_eval(cert, 0.0) == 0.0);
  CHECK_THROWS_AS(modulus_eval(cert, -0.1), std::invalid_argument);

  // continuity across the spline point
  double left = modulus_eval(cert, 1.0 - 1e-13);
  double right = modulus_eval(cert, 1.0 + 1e-13);
  CHECK(std::abs(left - right) <= 1e-12 * left);

  // omega'(0) = B, matched by the one-sided difference quotient
  CHECK(modulus_slope_at_zero(cert) == Catch::Approx(kE * kE).epsilon(1e-14));
  double h = 1e-18;
  CHECK(modulus_eval(cert, h) / h ==
        Catch::Approx(modulus_slope_at_zero(cert)).epsilon(1e-6));
}

TEST_CASE("modulus is nondecreasing and concave when B xi0 >= e^2") {
  ModulusCertificate cert = make_certificate(10.0, 30.0, 0.5, 0.5, 1.0);  // B xi0 = 15 > e^2
  double prev_slope = std::numeric_limits<double>::infinity();
  double prev_val = 0.0;
  for (double lx = -8.0; lx < 6.0; lx += 0.05) {
    double xi = std::exp(lx);
    double val = modulus_eval(cert, xi);
    double slope = modulus_slope(cert, xi);
    CHECK(val >= prev_val);
    CHECK(slope > 0.0);
    CHECK(slope <= prev_slope * (1.0 + 1e-12));
    prev_slope = slope;
    prev_val = val;
  }
  // left slope >= right slope at the spline point
  double xi0 = cert.xi0();
  CHECK(modulus_slope(cert, xi0 * (1.0 - 1e-9)) >= modulus_slope(cert, xi0 * (1.0 + 1e-9)));
}

TEST_CASE("doubling bound on the log branch at B xi0 = e^2") {
  // omega(2 xi) <= (3/2) omega(xi) for xi >= xi0 (gamma = 1/2 admissible).
  Grid g = make_grid(64, kPi);
  ModulusCertificate cert = build_certificate(sin_mode(g, 1, 2.0), 1.0);
  double xi0 = std::exp(cert.log_xi0);
  for (double f = 1.0; f < 1e6; f *= 2.7) {
    double xi = xi0 * f;
    CHECK(modulus_eval(cert, 2.0 * xi) <= 1.5 * modulus_eval(cert, xi) * (1.0 + 1e-12));
  }
}

TEST_CASE("recipe certificate: parameter values and compliance") {
  Grid g = make_grid(128, kPi);
  Field z = sin_mode(g, 1, 2.0);
  double gamma = 1.0;
  ModulusCertificate cert = build_certificate(z, gamma);

  CHECK(cert.K == Catch::Approx(4.0 * kPi * kE).epsilon(1e-13));
  CHECK(cert.K == Catch::Approx(34.158937).margin(1e-5));  // 4 pi e
  // B xi0 = e^2 exactly in log space
  CHECK(cert.log_B + cert.log_xi0 == Catch::Approx(2.0).margin(1e-14));
  // ln(N e^2) = (1 + 4 pi Gamma e^2) |Z|_inf
  double c4 = 1.0 + 4.0 * kPi * gamma * kE * kE;
  CHECK(cert.log_N + 2.0 == Catch::Approx(c4 * sup_norm(z)).epsilon(1e-12));
  // B = 2 N |dZ|_inf (1 + 4 pi Gamma e^2)
  double sup_dz = sup_norm(derivative(z));
  CHECK(cert.log_B ==
        Catch::Approx(std::log(2.0) + cert.log_N + std::log(sup_dz) + std::log(c4))
            .epsilon(1e-12));

  ConditionReport rep = check_conditions(cert, gamma, sup_norm(z), sup_dz);
  CHECK(rep.all_ok());
  CHECK(derivative_bound_check(z, cert));
  CHECK(scan_violation(z, cert).min_margin > 0.0);
}

TEST_CASE("recipe clamps N to one for small data") {
  Grid g = make_grid(64, kPi);
  Field z = sin_mode(g, 1, 1e-4);
  ModulusCertificate cert = build_certificate(z, 1.0);
  CHECK(cert.log_N == 0.0);
  CHECK(check_conditions(cert, 1.0, sup_norm(z), sup_norm(derivative(z))).all_ok());
}

TEST_CASE("recipe rejects constant data and nonpositive Gamma") {
  Grid g = make_grid(64, kPi);
  CHECK_THROWS_AS(build_certificate(constant_field(g, 0.0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_certificate(sin_mode(g, 1), 0.0), std::invalid_argument);
}

TEST_CASE("recipe certificates verify on random band-limited data") {
  Grid g = make_grid(128, kPi);
  int failures = 0;
  for (int trial = 0; trial < 30; ++trial) {
    double amp = std::pow(10.0, -2.0 + 3.0 * (trial % 10) / 10.0);
    Field z = random_band_limited(g, g.n() / 3, 7000 + static_cast<std::uint64_t>(trial), amp);
    double gamma = trial % 3 == 0 ? 0.5 : (trial % 3 == 1 ? 1.0 : 12.0);
    ModulusCertificate cert = build_certificate(z, gamma);
    ConditionReport rep = check_conditions(cert, gamma, sup_norm(z), sup_norm(derivative(z)));
    if (!rep.all_ok() || !derivative_bound_check(z, cert) ||
        !(scan_violation(z, cert).min_margin > 0.0))
      ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("check_conditions flags a too-small K") {
  Grid g = make_grid(64, kPi);
  Field z = sin_mode(g, 1, 2.0);
  ModulusCertificate cert = build_certificate(z, 1.0);
  // Lower K to pi Gamma sqrt(B xi0) = pi e: strictly below the 2 pi bound.
  ModulusCertificate weak = cert;
  weak.K = kPi * kE;
  ConditionReport rep = check_conditions(weak, 1.0, sup_norm(z), sup_norm(derivative(z)));
  CHECK_FALSE(rep.small_scale_ok);
  CHECK(rep.margin_small_scale < 0.0);
}

TEST_CASE("log-scale condition holds automatically at B xi0 = e^2") {
  // pi Gamma e^2 < 2 (1 + 4 pi Gamma e^2) for every Gamma > 0.
  Grid g = make_grid(64, kPi);
  for (double gamma : {0.01, 0.5, 1.0, 20.0, 1000.0}) {
    ModulusCertificate cert = build_certificate(sin_mode(g, 1, 3.0), gamma);
    ConditionReport rep =
        check_conditions(cert, gamma, 3.0, sup_norm(derivative(sin_mode(g, 1, 3.0))));
    CHECK(rep.log_scale_ok);
  }
}

TEST_CASE("generic small-scale condition: limits and the recipe point") {
  // xi -> 0+: left factor -> 1, middle -> -K a < 0 < K a^2: holds.
  CHECK(generic_small_scale_condition(10.0, 1.0, 0.5, 1e-12));
  // very large xi: the pi Gamma xi^{1-a} term dominates: fails.
  CHECK_FALSE(generic_small_scale_condition(10.0, 1.0, 0.5, 1e9));
  // recipe point: K = 4 pi Gamma e, xi = xi0 with B xi0 = e^2.
  Grid g = make_grid(64, kPi);
  ModulusCertificate cert = build_certificate(sin_mode(g, 1, 2.0), 1.0);
  CHECK(generic_small_scale_condition(cert.K, 1.0, 0.5, cert.xi0()));
}

TEST_CASE("scan_violation geometry") {
  Grid g = make_grid(64, kPi);
  ModulusCertificate cert = make_certificate(4.0 * kPi * kE, kE * kE, 1.0, 0.5, 1.0);

  SECTION("constant field: margin is omega at the smallest distance") {
    ScanResult r = scan_violation(constant_field(g, 3.0), cert);
    CHECK(r.min_margin == Catch::Approx(modulus_eval(cert, g.dx())).epsilon(1e-12));
    CHECK(std::abs(r.j - r.i) == 1);
  }

  SECTION("shrinking the field recovers the pure-omega margins") {
    Field z = sin_mode(g, 1);
    ScanResult big = scan_violation(z, cert);
    Field tiny = z;
    tiny *= 1e-12;
    ScanResult small = scan_violation(tiny, cert);
    CHECK(small.min_margin == Catch::Approx(modulus_eval(cert, g.dx())).epsilon(1e-6));
    CHECK(big.min_margin < small.min_margin);
  }

  SECTION("an actual violation is negative and locates the offending pair") {
    // A steep two-level field against a small modulus.
    ModulusCertificate tight = make_certificate(100.0, 10.0, 1.0, 0.5, 1.0);
    Field f(g);
    for (int j = 0; j < g.n(); ++j)
      f.values[static_cast<std::size_t>(j)] = j < g.n() / 2 ? 1.0 : -1.0;
    ScanResult r = scan_violation(f, tight);
    CHECK(r.min_margin < 0.0);
    CHECK(f.values[static_cast<std::size_t>(r.i)] !=
          f.values[static_cast<std::size_t>(r.j)]);
  }
}

TEST_CASE("derivative bound check compares |dZ|_inf with B") {
  Grid g = make_grid(64, kPi);
  ModulusCertificate unit = make_certificate(4.0 * kPi * kE, 1.0, kE * kE, 0.5, 1.0);  // B = 1
  CHECK(derivative_bound_check(constant_field(g, 4.0), unit));
  CHECK_FALSE(derivative_bound_check(sin_mode(g, 1, 2.0), unit));  // |dZ|_inf = 2 > B

  Field z = sin_mode(g, 2, 1.5);
  ModulusCertificate cert = build_certificate(z, 1.0);
  CHECK(derivative_bound_check(z, cert));
}

TEST_CASE("certificate survives the double-overflow regime") {
  // |Z|_inf = 50 at Gamma ~ e^{2.5} drives ln N ~ 5.6e4: N and B overflow
  // doubles, the log-space representation must stay finite end to end.
  Grid g = make_grid(128, kPi);
  Field z = sin_mode(g, 1, 50.0);
  double gamma = std::exp(2.5);
  ModulusCertificate cert = build_certificate(z, gamma);
  CHECK(cert.log_N > 5e4);
  CHECK(std::isinf(cert.N()));
  CHECK(std::isinf(cert.B()));
  CHECK(cert.xi0() == 0.0);
  CHECK(std::isfinite(cert.C));

  for (double d : {g.dx(), 0.5, kPi}) {
    double om = modulus_eval(cert, d);
    CHECK(std::isfinite(om));
    CHECK(om > 100.0);  // astronomically safe bound, but finite
  }
  ScanResult r = scan_violation(z, cert);
  CHECK(std::isfinite(r.min_margin));
  CHECK(r.min_margin > 0.0);
  CHECK(check_conditions(cert, gamma, sup_norm(z), sup_norm(derivative(z))).all_ok());
  CHECK(derivative_bound_check(z, cert));
}

TEST_CASE("modulus is preserved along a desk-scale critical Burgers run") {
  Grid g = make_grid(128, kPi);
  ModelParams p;
  p.model = Model::Burgers;
  p.alpha_diff = 1.0;
  p.chi = 1.0;
  p.mass = 0.3;
  Field z0 = sin_mode(g, 1, 2.0);
  double gamma = run_gamma(p, 1.0);  // sup f on [0, 1]
  ModulusCertificate cert = build_certificate(z0, gamma);

  StepperConfig cfg;
  cfg.t_end = 1.0;
  cfg.monitor_cadence = 0.1;
  double min_margin = std::numeric_limits<double>::infinity();
  Monitor mon = [&](const State& s, ReportRow& row) {
    ScanResult r = scan_violation(s.field, cert);
    row.cert_margin = r.min_margin;
    min_margin = std::min(min_margin, r.min_margin);
  };
  State st{z0, 0.0};
  RunReport rep = integrate(st, p, cfg, {mon});
  REQUIRE(rep.status == RunStatus::Ok);
  CHECK(min_margin > 0.0);
}

TEST_CASE("radial stationary profile") {
  // chi = 1, S1 = 2: S(r) = 4r/(1+r).
  CHECK(radial_stationary(1.0, 1.0, 2.0) == Catch::Approx(2.0).epsilon(1e-14));
  CHECK(radial_stationary(0.0, 1.0, 2.0) == 0.0);
  CHECK(radial_stationary(0.5, 1.0, 2.0) == Catch::Approx(4.0 * 0.5 / 1.5).epsilon(1e-14));

  SECTION("residual of r S'' + (chi/2) S S' vanishes (analytic derivatives)") {
    double chi = 1.0, S1 = 2.0;
    double D = 4.0 / (chi * S1) - 1.0;
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      double r = 0.01 + (1.0 - 0.01) * (i + 0.5) / 10000.0;
      double S = radial_stationary(r, chi, S1);
      double Sp = (4.0 / chi) * D / ((D + r) * (D + r));
      double Spp = -(8.0 / chi) * D / ((D + r) * (D + r) * (D + r));
      double residual = r * Spp + 0.5 * chi * S * Sp;
      worst = std::max(worst, std::abs(residual));
    }
    CHECK(worst <= 1e-10);
  }

  SECTION("supercritical and out-of-range arguments are rejected") {
    CHECK_THROWS_AS(radial_stationary(0.5, 1.0, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(radial_stationary(0.5, 1.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(radial_stationary(1.5, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(radial_stationary(-0.1, 1.0, 2.0), std::invalid_argument);
    CHECK_NOTHROW(radial_stationary(0.5, 2.0, 1.9));
  }
}
