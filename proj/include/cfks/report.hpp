#pragma once
// report.hpp — run report: the time series of monitored quantities.

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace cfks {

enum class RunStatus { Ok, BlowupDetected, DtUnderflow };

inline std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "OK";
    case RunStatus::BlowupDetected: return "BLOWUP_DETECTED";
    case RunStatus::DtUnderflow: return "DT_UNDERFLOW";
  }
  return "?";
}

struct ReportRow {
  double t = 0.0;
  double mean = 0.0;     // field mean (mass column for Keller-Segel runs)
  double l2_dev = 0.0;   // |u - m|_0 or |Z|_0
  double sup_dev = 0.0;
  double h_half = 0.0;   // |Lambda^(1/2) dev|_0
  double grad_sup = 0.0;
  double dt = 0.0;
  double cert_margin = std::numeric_limits<double>::quiet_NaN();
  bool poincare_ok = true;
  double agmon_ratio = std::numeric_limits<double>::quiet_NaN();
};

struct RunReport {
  std::vector<ReportRow> rows;
  RunStatus status = RunStatus::Ok;
  std::vector<std::pair<std::string, std::string>> config_echo;
  double t_terminal = 0.0;
  double max_grad = 0.0;  // sup over all steps (not only monitored times)
};

}  // namespace cfks
