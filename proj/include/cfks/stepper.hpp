#pragma once
// stepper.hpp — exponential time differencing (ETDRK4) with adaptive steps,
// blowup detection, and monitor scheduling.
//
// The linear symbol lambda_k (from dynamics::linear_symbol) is integrated
// exactly per mode; the nonlinearity is advanced by the Cox-Matthews
// fourth-order scheme. With the stage abscissae t, t+h/2, t+h/2, t+h the
// scheme keeps classical order four for the time-dependent Burgers
// coefficient f(t).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cfks/dynamics.hpp"
#include "cfks/report.hpp"

namespace cfks {

struct StepperConfig {
  double dt_init = 0.01;  // also the upper clamp of the adaptive step
  double dt_min = 1e-9;
  double cfl = 0.4;
  double t_end = 1.0;
  double blowup_grad_threshold = 1e6;  // on |d/dx field|_inf
  double monitor_cadence = 0.1;

  void validate() const {
    if (!(dt_min > 0.0) || !(dt_init >= dt_min))
      throw std::invalid_argument("StepperConfig: need 0 < dt_min <= dt_init");
    if (!(cfl > 0.0) || cfl > 1.0)
      throw std::invalid_argument("StepperConfig: cfl must lie in (0, 1]");
    if (!(t_end > 0.0)) throw std::invalid_argument("StepperConfig: t_end must be positive");
    if (!(blowup_grad_threshold > 0.0))
      throw std::invalid_argument("StepperConfig: blowup_grad_threshold must be positive");
    if (!(monitor_cadence > 0.0))
      throw std::invalid_argument("StepperConfig: monitor_cadence must be positive");
  }
};

enum class StepStatus { Ok, BlowupDetected, DtUnderflow };

struct StepOutcome {
  StepStatus status = StepStatus::Ok;
  State state;
  double dt_used = 0.0;
};

// --- phi functions -------------------------------------------------------------
// phi_m(z) = sum_{j>=0} z^j / (j+m)!. The direct expm1 formulas cancel badly
// for small |z|, so a Taylor tail takes over below |z| = 1.

namespace detail {

inline double phi_series(int m, double z) {
  double fact = 1.0;
  for (int j = 2; j <= m; ++j) fact *= j;
  double term = 1.0 / fact;  // z^0 / m!
  double sum = term;
  for (int j = 1; j < 40; ++j) {
    term *= z / static_cast<double>(j + m);
    sum += term;
    if (std::abs(term) < 1e-20 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace detail

inline double phi1(double z) {
  if (std::abs(z) < 1.0) return detail::phi_series(1, z);
  return std::expm1(z) / z;
}

inline double phi2(double z) {
  if (std::abs(z) < 1.0) return detail::phi_series(2, z);
  return (std::expm1(z) - z) / (z * z);
}

inline double phi3(double z) {
  if (std::abs(z) < 1.0) return detail::phi_series(3, z);
  return (std::expm1(z) - z - 0.5 * z * z) / (z * z * z);
}

// Per-mode ETDRK4 coefficients for one step size.
struct EtdCoefficients {
  std::vector<double> E, E2, Q, w1, w23, w4;

  EtdCoefficients(const std::vector<double>& symbol, double dt) {
    std::size_t n = symbol.size();
    E.resize(n); E2.resize(n); Q.resize(n); w1.resize(n); w23.resize(n); w4.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double z = symbol[i] * dt;
      E[i] = std::exp(z);
      E2[i] = std::exp(0.5 * z);
      Q[i] = 0.5 * dt * phi1(0.5 * z);
      double p1 = phi1(z), p2 = phi2(z), p3 = phi3(z);
      w1[i] = dt * (p1 - 3.0 * p2 + 4.0 * p3);
      w23[i] = dt * (2.0 * p2 - 4.0 * p3);
      w4[i] = dt * (4.0 * p3 - p2);
    }
  }
};

// One Cox-Matthews ETDRK4 step. Returns BlowupDetected if the advanced field
// has non-finite values. The mean mode is untouched by the nonlinearity and
// carries linear factor e^{0} (or e^{chi m dt} for the W equation, whose mean
// is zero), so the model's mean invariant is preserved to machine precision.
inline StepOutcome step(const State& state, double dt, const ModelParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const Grid& g = state.field.grid;
  std::vector<double> sym = linear_symbol(g, p);
  EtdCoefficients c(sym, dt);
  double t = state.time;

  Spectrum u = to_spectrum(state.field);
  std::size_t n = u.size();
  Spectrum n1 = nonlinear_rhs(g, u, t, p);

  Spectrum a(n), b(n), cc(n), out(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = c.E2[i] * u[i] + c.Q[i] * n1[i];
  Spectrum na = nonlinear_rhs(g, a, t + 0.5 * dt, p);
  for (std::size_t i = 0; i < n; ++i) b[i] = c.E2[i] * u[i] + c.Q[i] * na[i];
  Spectrum nb = nonlinear_rhs(g, b, t + 0.5 * dt, p);
  for (std::size_t i = 0; i < n; ++i) cc[i] = c.E2[i] * a[i] + c.Q[i] * (2.0 * nb[i] - n1[i]);
  Spectrum nc = nonlinear_rhs(g, cc, t + dt, p);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = c.E[i] * u[i] + c.w1[i] * n1[i] + c.w23[i] * (na[i] + nb[i]) + c.w4[i] * nc[i];

  StepOutcome r;
  r.state.field = to_field(g, std::move(out));
  r.state.time = t + dt;
  r.dt_used = dt;
  r.status = all_finite(r.state.field) ? StepStatus::Ok : StepStatus::BlowupDetected;
  return r;
}

namespace detail {

// Transport speed scale of each model, the quantity the CFL control tracks.
inline double advective_speed(const State& state, const ModelParams& p) {
  const Grid& g = state.field.grid;
  switch (p.model) {
    case Model::KellerSegel: {
      Spectrum s = to_spectrum(state.field);
      s[0] = cplx{0.0, 0.0};
      Field dv = to_field(g, derivative(g, solve_poisson_zero_mean(g, std::move(s))));
      return p.chi * sup_norm(dv);
    }
    case Model::Burgers:
      return std::abs(f_of_t(state.time, p.chi, p.mass)) * sup_norm(state.field);
    case Model::WEquation:
      return p.chi * sup_norm(state.field);
  }
  return 0.0;
}

inline double unclamped_dt(const State& state, const ModelParams& p, const StepperConfig& cfg) {
  return cfg.cfl * state.field.grid.dx() / std::max(1e-12, advective_speed(state, p));
}

}  // namespace detail

// Advective step control: dt = cfl * dx / max(eps, V), clamped to
// [dt_min, dt_init]. V is the model's transport speed scale.
inline double adapt_dt(const State& state, const ModelParams& p, const StepperConfig& cfg) {
  double dt = detail::unclamped_dt(state, p, cfg);
  return std::min(std::max(dt, cfg.dt_min), cfg.dt_init);
}

// Monitor callbacks run at every monitor time with the current state; they
// may annotate the report row (certificate margins, inequality flags).
using Monitor = std::function<void(const State&, ReportRow&)>;

namespace detail {

inline ReportRow make_row(const State& s, const ModelParams& p, double dt_used) {
  ReportRow row;
  row.t = s.time;
  row.mean = mean(s.field);
  Field dev = s.field;
  if (p.model == Model::KellerSegel)
    for (double& v : dev.values) v -= p.mass;
  NormSet ns = norms(dev);
  row.l2_dev = ns.l2;
  row.sup_dev = ns.sup;
  row.h_half = ns.h_half_homog;
  row.grad_sup = sup_norm(derivative(s.field));
  row.dt = dt_used;
  return row;
}

}  // namespace detail

// Integrates until t_end, blowup, or step underflow. Monitor rows are
// emitted at the start time and at every multiple of monitor_cadence the
// trajectory crosses (steps land on those times exactly), plus the terminal
// time. Rows are only emitted for finite states, so every recorded row is
// meaningful. The state is advanced in place to the terminal state.
inline RunReport integrate(State& state, const ModelParams& p, const StepperConfig& cfg,
                           const std::vector<Monitor>& monitors = {}) {
  p.validate();
  cfg.validate();
  RunReport rep;
  const double t_eps = 1e-12;
  double dt_last = 0.0;
  int consecutive_dt_min = 0;
  std::uint64_t steps = 0;
  const std::uint64_t step_cap =
      static_cast<std::uint64_t>(std::ceil(cfg.t_end / cfg.dt_min)) + 8;

  auto emit = [&](const State& s, double dt_used) {
    if (!all_finite(s.field)) return;
    if (!rep.rows.empty() && !(s.time > rep.rows.back().t + t_eps)) return;
    ReportRow row = detail::make_row(s, p, dt_used);
    rep.max_grad = std::max(rep.max_grad, row.grad_sup);
    for (const Monitor& m : monitors) m(s, row);
    rep.rows.push_back(row);
  };

  emit(state, 0.0);
  // Next monitor time: smallest multiple of the cadence strictly ahead.
  auto next_monitor = [&](double t) {
    double j = std::floor(t / cfg.monitor_cadence + t_eps) + 1.0;
    return j * cfg.monitor_cadence;
  };
  double t_mon = next_monitor(state.time);

  while (state.time < cfg.t_end - t_eps) {
    double dt_raw = detail::unclamped_dt(state, p, cfg);
    double dt_a = std::min(std::max(dt_raw, cfg.dt_min), cfg.dt_init);
    // The CFL candidate falling below dt_min means the clamp is hiding a
    // genuinely under-resolved step; 100 in a row is terminal.
    if (dt_raw < cfg.dt_min) {
      if (++consecutive_dt_min >= 100) {
        rep.status = RunStatus::DtUnderflow;
        break;
      }
    } else {
      consecutive_dt_min = 0;
    }
    double dt = std::min(dt_a, cfg.t_end - state.time);
    if (t_mon - state.time > t_eps) dt = std::min(dt, t_mon - state.time);

    StepOutcome out = step(state, dt, p);
    ++steps;
    if (out.status == StepStatus::BlowupDetected) {
      rep.status = RunStatus::BlowupDetected;
      state = std::move(out.state);
      break;
    }
    state = std::move(out.state);
    dt_last = dt;

    double grad = sup_norm(derivative(state.field));
    rep.max_grad = std::max(rep.max_grad, grad);
    if (grad > cfg.blowup_grad_threshold) {
      rep.status = RunStatus::BlowupDetected;
      break;
    }
    if (state.time >= t_mon - t_eps) {
      emit(state, dt_last);
      t_mon = next_monitor(state.time);
    }
    if (steps > step_cap) {
      rep.status = RunStatus::DtUnderflow;
      break;
    }
  }
  emit(state, dt_last);  // terminal row; skipped if the state went non-finite
  rep.t_terminal = state.time;
  return rep;
}

}  // namespace cfks
