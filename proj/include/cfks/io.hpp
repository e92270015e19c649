#pragma once
// io.hpp — serialization: series CSV, snapshot/certificate JSON, SVG plots.
//
// Floats are written in shortest round-trip decimal (std::to_chars), so a
// re-parsed CSV reproduces the in-memory doubles bit-exactly and identical
// runs produce byte-identical files.

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "cfks/certificate.hpp"
#include "cfks/experiments.hpp"
#include "cfks/report.hpp"

namespace cfks {

inline std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  if (r.ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw std::invalid_argument("parse_double: bad float '" + s + "'");
  return v;
}

// Decimal form of e^{log_e}. Values inside double range use the shortest
// round-trip form; certificate parameters like N and B can exceed it, and
// are then written as <mantissa>e<exponent> from the log representation
// (a valid JSON number of astronomical magnitude).
inline std::string format_from_log(double log_e) {
  double v = std::exp(log_e);
  if (std::isfinite(v) && v > 0.0) return format_double(v);
  double log10v = log_e / std::log(10.0);
  double e10 = std::floor(log10v);
  double mant = std::pow(10.0, log10v - e10);
  char buf[64];
  int len = std::snprintf(buf, sizeof(buf), "%.15ge%+d", mant, static_cast<int>(e10));
  return std::string(buf, static_cast<std::size_t>(len));
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-stable newlines
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace detail

inline const char* kSeriesHeader =
    "t,mean,l2_dev,sup_dev,h_half,grad_sup,dt,cert_margin,poincare_ok,agmon_ratio";

inline std::string series_csv_text(const RunReport& rep) {
  std::string out(kSeriesHeader);
  out += '\n';
  for (const ReportRow& r : rep.rows) {
    out += format_double(r.t) + ',' + format_double(r.mean) + ',' + format_double(r.l2_dev) +
           ',' + format_double(r.sup_dev) + ',' + format_double(r.h_half) + ',' +
           format_double(r.grad_sup) + ',' + format_double(r.dt) + ',' +
           format_double(r.cert_margin) + ',' + (r.poincare_ok ? "1" : "0") + ',' +
           format_double(r.agmon_ratio) + '\n';
  }
  return out;
}

inline void write_series(const RunReport& rep, const std::string& path) {
  detail::open_out(path) << series_csv_text(rep);
}

// Parses a series CSV produced by write_series (round-trip tested).
inline std::vector<ReportRow> parse_series_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line != kSeriesHeader)
    throw std::invalid_argument("parse_series_csv: bad header");
  std::vector<ReportRow> rows;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ls(line);
    std::string item;
    while (std::getline(ls, item, ',')) parts.push_back(item);
    if (parts.size() != 10) throw std::invalid_argument("parse_series_csv: bad row");
    ReportRow r;
    r.t = parse_double(parts[0]);
    r.mean = parse_double(parts[1]);
    r.l2_dev = parse_double(parts[2]);
    r.sup_dev = parse_double(parts[3]);
    r.h_half = parse_double(parts[4]);
    r.grad_sup = parse_double(parts[5]);
    r.dt = parse_double(parts[6]);
    r.cert_margin = parse_double(parts[7]);
    r.poincare_ok = parts[8] == "1";
    r.agmon_ratio = parse_double(parts[9]);
    rows.push_back(r);
  }
  return rows;
}

// Snapshot JSON: {"t": ..., "grid": {"n": ..., "L": ...}, "values": [...]},
// values in grid order from x = -L.
inline std::string snapshot_json_text(const State& state) {
  std::string out = "{\"t\": " + format_double(state.time) + ", \"grid\": {\"n\": " +
                    std::to_string(state.field.grid.n()) +
                    ", \"L\": " + format_double(state.field.grid.half_length()) +
                    "}, \"values\": [";
  for (std::size_t j = 0; j < state.field.values.size(); ++j) {
    if (j) out += ", ";
    out += format_double(state.field.values[j]);
  }
  out += "]}\n";
  return out;
}

inline void write_snapshot(const State& state, const std::string& path) {
  detail::open_out(path) << snapshot_json_text(state);
}

// Certificate JSON: flat record {K, B, xi0, N, C, a, Gamma}.
inline std::string certificate_json_text(const ModulusCertificate& cert) {
  std::string out = "{";
  out += "\"K\": " + format_double(cert.K);
  out += ", \"B\": " + format_from_log(cert.log_B);
  out += ", \"xi0\": " + format_from_log(cert.log_xi0);
  out += ", \"N\": " + format_from_log(cert.log_N);
  out += ", \"C\": " + format_double(cert.C);
  out += ", \"a\": " + format_double(cert.a);
  out += ", \"Gamma\": " + format_double(cert.Gamma);
  out += "}\n";
  return out;
}

inline void write_certificate(const ModulusCertificate& cert, const std::string& path) {
  detail::open_out(path) << certificate_json_text(cert);
}

// Sweep CSV: one row per cell.
inline const char* kSweepHeader = "alpha_diff,amplitude,classification,max_grad,t_terminal";

inline std::string sweep_csv_text(const std::vector<SweepCell>& cells) {
  std::string out(kSweepHeader);
  out += '\n';
  for (const SweepCell& c : cells) {
    out += format_double(c.alpha_diff) + ',' + format_double(c.amplitude) + ',' +
           cell_class_name(c.classification) + ',' + format_double(c.max_grad) + ',' +
           format_double(c.t_terminal) + '\n';
  }
  return out;
}

inline void write_sweep_csv(const std::vector<SweepCell>& cells, const std::string& path) {
  detail::open_out(path) << sweep_csv_text(cells);
}

// Minimal SVG of the log-norm traces (convenience artifact; pure text).
inline std::string plot_svg_text(const RunReport& rep) {
  const int W = 860, H = 540, ML = 70, MR = 20, MT = 30, MB = 50;
  struct Trace {
    const char* name;
    const char* color;
    double ReportRow::* member;
  };
  const Trace traces[] = {{"l2_dev", "#1f77b4", &ReportRow::l2_dev},
                          {"sup_dev", "#d62728", &ReportRow::sup_dev},
                          {"h_half", "#2ca02c", &ReportRow::h_half},
                          {"grad_sup", "#ff7f0e", &ReportRow::grad_sup}};
  double t0 = 0.0, t1 = 1.0, y0 = 0.0, y1 = 1.0;
  bool any = false;
  for (const ReportRow& r : rep.rows) {
    for (const Trace& tr : traces) {
      double v = r.*(tr.member);
      if (!(v > 0.0) || !std::isfinite(v)) continue;
      double ly = std::log10(v);
      if (!any) { t0 = t1 = r.t; y0 = y1 = ly; any = true; }
      t0 = std::min(t0, r.t); t1 = std::max(t1, r.t);
      y0 = std::min(y0, ly); y1 = std::max(y1, ly);
    }
  }
  if (!any) { t0 = y0 = 0.0; t1 = y1 = 1.0; }
  if (t1 <= t0) t1 = t0 + 1.0;
  if (y1 <= y0) y1 = y0 + 1.0;
  auto px = [&](double t) { return ML + (t - t0) / (t1 - t0) * (W - ML - MR); };
  auto py = [&](double ly) { return H - MB - (ly - y0) / (y1 - y0) * (H - MT - MB); };
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(W) +
                    "\" height=\"" + std::to_string(H) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + std::to_string(ML) + "\" y1=\"" + std::to_string(H - MB) + "\" x2=\"" +
         std::to_string(W - MR) + "\" y2=\"" + std::to_string(H - MB) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + std::to_string(ML) + "\" y1=\"" + std::to_string(MT) + "\" x2=\"" +
         std::to_string(ML) + "\" y2=\"" + std::to_string(H - MB) + "\" stroke=\"black\"/>\n";
  int li = 0;
  for (const Trace& tr : traces) {
    std::string pts;
    for (const ReportRow& r : rep.rows) {
      double v = r.*(tr.member);
      if (!(v > 0.0) || !std::isfinite(v)) continue;
      pts += format_double(px(r.t)) + "," + format_double(py(std::log10(v))) + " ";
    }
    if (!pts.empty())
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(tr.color) +
             "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    svg += "<text x=\"" + std::to_string(ML + 10 + 110 * li) + "\" y=\"" + std::to_string(MT - 10) +
           "\" fill=\"" + tr.color + "\" font-size=\"13\">" + tr.name + "</text>\n";
    ++li;
  }
  svg += "<text x=\"" + std::to_string(ML) + "\" y=\"" + std::to_string(H - MB + 20) +
         "\" font-size=\"12\">t = " + format_double(t0) + "</text>\n";
  svg += "<text x=\"" + std::to_string(W - MR - 90) + "\" y=\"" + std::to_string(H - MB + 20) +
         "\" font-size=\"12\">t = " + format_double(t1) + "</text>\n";
  svg += "<text x=\"5\" y=\"" + std::to_string(H - MB) + "\" font-size=\"12\">log10 " +
         format_double(y0) + "</text>\n";
  svg += "<text x=\"5\" y=\"" + std::to_string(MT + 10) + "\" font-size=\"12\">log10 " +
         format_double(y1) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

inline void write_plot(const RunReport& rep, const std::string& path) {
  detail::open_out(path) << plot_svg_text(rep);
}

}  // namespace cfks
