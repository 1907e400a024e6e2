// Check reports and their renderings.  The JSON emitter is hand-rolled so the
// byte stream is fully deterministic: fixed key order, %.17g numbers.

#pragma once

#include <string>
#include <vector>

#include "phm/linalg.hpp"

namespace phm {

enum class Verdict { Pass, Fail, Indeterminate, NotApplicable };
const char* verdict_name(Verdict v);

struct CheckReport {
  std::string name;
  Verdict verdict = Verdict::NotApplicable;
  double max = 0.0;
  double mean = 0.0;
  int worst_index = -1;
  VecD worst_coords;
};

struct ReportHeader {
  std::string scenario;
  uint64_t seed = 0;
  int points = 0;
  double tol = 0.0;
};

Verdict verdict_of(double max_defect, double tol, double fail_threshold);

std::string emit_report_json(const ReportHeader& hdr, const std::vector<CheckReport>& checks);
std::string emit_report_text(const ReportHeader& hdr, const std::vector<CheckReport>& checks);

}  // namespace phm
