#pragma once
// config.hpp — run configuration: one `key = value` per line, `#` comments.
//
// Unknown keys, bad values, and module-invariant violations are rejected
// with the offending key named in the message.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cfks/dynamics.hpp"

namespace cfks {

struct RunConfig {
  // model and physics
  std::string model;  // keller_segel | burgers | w_equation
  double alpha_diff = 1.0;
  double chi = 1.0;
  double mass = 0.0;
  double half_length = detail::kPi;
  int n = 256;

  // stepping
  double t_end = 0.0;
  double dt_init = 0.01;
  double dt_min = 1e-9;
  double cfl = 0.4;
  double monitor_cadence = 0.1;
  double blowup_grad_threshold = 1e6;

  // initial datum: preset cosine (amplitude, mode), explicit cosine
  // coefficient list, or seeded random band-limited data
  std::string initial = "cosine";
  double amplitude = 1.0;
  int mode = 1;
  std::vector<double> coefficients;
  std::uint64_t seed = 1;
  int band_limit = 0;  // 0 = n/3

  // outputs (empty path = skip)
  std::string series_csv;
  std::string snapshot_json;
  std::string certificate_json;
  std::string plot_svg;

  // harness switches
  bool certify = false;
  bool decay = false;
  double cert_t0 = 0.01;
  double roundtrip_tol = 1e-8;
  double fit_t_lo = -1.0;  // < 0: default t_end/2
  double fit_t_hi = -1.0;  // < 0: default t_end

  // sweep grids
  std::vector<double> sweep_alphas;
  std::vector<double> sweep_amplitudes;

  // recognized keys with their raw values, in file order
  std::vector<std::pair<std::string, std::string>> echo;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] inline void config_fail(const std::string& key, const std::string& what) {
  throw std::invalid_argument("config: key '" + key + "': " + what);
}

inline double parse_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc{} || r.ptr != v.data() + v.size())
    config_fail(key, "expected a real number, got '" + v + "'");
  return out;
}

inline long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc{} || r.ptr != v.data() + v.size())
    config_fail(key, "expected an integer, got '" + v + "'");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  config_fail(key, "expected true or false, got '" + v + "'");
}

inline std::vector<double> parse_real_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) config_fail(key, "empty entry in list");
    out.push_back(parse_real(key, item));
  }
  if (out.empty()) config_fail(key, "expected a comma-separated list of reals");
  return out;
}

}  // namespace detail

inline Model parse_model(const std::string& name) {
  if (name == "keller_segel") return Model::KellerSegel;
  if (name == "burgers") return Model::Burgers;
  if (name == "w_equation") return Model::WEquation;
  detail::config_fail("model",
                      "expected keller_segel, burgers, or w_equation, got '" + name + "'");
}

inline RunConfig parse_config(const std::string& text) {
  RunConfig c;
  bool saw_model = false, saw_alpha = false, saw_t_end = false;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty()) detail::config_fail("(empty)", "missing key name");

    if (key == "model") { c.model = val; saw_model = true; }
    else if (key == "alpha_diff") { c.alpha_diff = detail::parse_real(key, val); saw_alpha = true; }
    else if (key == "chi") c.chi = detail::parse_real(key, val);
    else if (key == "mass") c.mass = detail::parse_real(key, val);
    else if (key == "half_length") c.half_length = detail::parse_real(key, val);
    else if (key == "n") c.n = static_cast<int>(detail::parse_int(key, val));
    else if (key == "t_end") { c.t_end = detail::parse_real(key, val); saw_t_end = true; }
    else if (key == "dt_init") c.dt_init = detail::parse_real(key, val);
    else if (key == "dt_min") c.dt_min = detail::parse_real(key, val);
    else if (key == "cfl") c.cfl = detail::parse_real(key, val);
    else if (key == "monitor_cadence") c.monitor_cadence = detail::parse_real(key, val);
    else if (key == "blowup_grad_threshold") c.blowup_grad_threshold = detail::parse_real(key, val);
    else if (key == "initial") c.initial = val;
    else if (key == "amplitude") c.amplitude = detail::parse_real(key, val);
    else if (key == "mode") c.mode = static_cast<int>(detail::parse_int(key, val));
    else if (key == "coefficients") c.coefficients = detail::parse_real_list(key, val);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(detail::parse_int(key, val));
    else if (key == "band_limit") c.band_limit = static_cast<int>(detail::parse_int(key, val));
    else if (key == "series_csv") c.series_csv = val;
    else if (key == "snapshot_json") c.snapshot_json = val;
    else if (key == "certificate_json") c.certificate_json = val;
    else if (key == "plot_svg") c.plot_svg = val;
    else if (key == "certify") c.certify = detail::parse_bool(key, val);
    else if (key == "decay") c.decay = detail::parse_bool(key, val);
    else if (key == "cert_t0") c.cert_t0 = detail::parse_real(key, val);
    else if (key == "roundtrip_tol") c.roundtrip_tol = detail::parse_real(key, val);
    else if (key == "fit_t_lo") c.fit_t_lo = detail::parse_real(key, val);
    else if (key == "fit_t_hi") c.fit_t_hi = detail::parse_real(key, val);
    else if (key == "sweep_alphas") c.sweep_alphas = detail::parse_real_list(key, val);
    else if (key == "sweep_amplitudes") c.sweep_amplitudes = detail::parse_real_list(key, val);
    else detail::config_fail(key, "unknown key");
    c.echo.emplace_back(key, val);
  }

  if (!saw_model) detail::config_fail("model", "required key missing");
  if (!saw_alpha) detail::config_fail("alpha_diff", "required key missing");
  if (!saw_t_end) detail::config_fail("t_end", "required key missing");

  // Module preconditions, surfaced with the key name.
  parse_model(c.model);
  if (!(c.alpha_diff > 0.0) || c.alpha_diff > 2.0)
    detail::config_fail("alpha_diff", "must lie in (0, 2]");
  if (!(c.chi >= 0.0)) detail::config_fail("chi", "must be >= 0");
  if (!(c.mass >= 0.0)) detail::config_fail("mass", "must be >= 0");
  if (!(c.half_length > 0.0)) detail::config_fail("half_length", "must be positive");
  if (c.n < 8 || c.n % 2 != 0) detail::config_fail("n", "must be even and >= 8");
  if (!(c.t_end > 0.0)) detail::config_fail("t_end", "must be positive");
  if (!(c.dt_min > 0.0)) detail::config_fail("dt_min", "must be positive");
  if (!(c.dt_init >= c.dt_min)) detail::config_fail("dt_init", "must be >= dt_min");
  if (!(c.cfl > 0.0) || c.cfl > 1.0) detail::config_fail("cfl", "must lie in (0, 1]");
  if (!(c.monitor_cadence > 0.0)) detail::config_fail("monitor_cadence", "must be positive");
  if (!(c.blowup_grad_threshold > 0.0))
    detail::config_fail("blowup_grad_threshold", "must be positive");
  if (c.initial != "cosine" && c.initial != "coefficients" && c.initial != "random")
    detail::config_fail("initial", "expected cosine, coefficients, or random");
  if (c.initial == "coefficients" && c.coefficients.empty())
    detail::config_fail("coefficients", "required when initial = coefficients");
  if (c.mode < 1 || 3 * c.mode > c.n) detail::config_fail("mode", "must satisfy 1 <= mode <= n/3");
  if (c.band_limit < 0 || 3 * c.band_limit > c.n)
    detail::config_fail("band_limit", "must satisfy 0 <= band_limit <= n/3");
  if (static_cast<int>(c.coefficients.size()) * 3 > c.n)
    detail::config_fail("coefficients", "list longer than n/3 modes");
  if (!(c.cert_t0 > 0.0) || !(c.cert_t0 < c.t_end))
    detail::config_fail("cert_t0", "must lie in (0, t_end)");
  if (!(c.roundtrip_tol > 0.0)) detail::config_fail("roundtrip_tol", "must be positive");
  return c;
}

}  // namespace cfks
