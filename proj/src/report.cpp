#include "phm/report.hpp"

#include <cstdio>

namespace phm {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Indeterminate: return "indeterminate";
    case Verdict::NotApplicable: return "not_applicable";
  }
  return "?";
}

Verdict verdict_of(double max_defect, double tol, double fail_threshold) {
  if (max_defect < tol) return Verdict::Pass;
  if (max_defect >= fail_threshold) return Verdict::Fail;
  return Verdict::Indeterminate;
}

namespace {
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}
}  // namespace

std::string emit_report_json(const ReportHeader& hdr, const std::vector<CheckReport>& checks) {
  std::string s = "{";
  s += "\"scenario\":" + quote(hdr.scenario);
  s += ",\"seed\":" + std::to_string(hdr.seed);
  s += ",\"points\":" + std::to_string(hdr.points);
  s += ",\"tol\":" + num(hdr.tol);
  s += ",\"checks\":[";
  bool first = true;
  for (const auto& c : checks) {
    if (!first) s += ",";
    first = false;
    s += "{\"name\":" + quote(c.name);
    s += ",\"max\":" + num(c.max);
    s += ",\"mean\":" + num(c.mean);
    s += ",\"verdict\":" + quote(verdict_name(c.verdict));
    if (c.verdict == Verdict::NotApplicable || c.worst_index < 0) {
      s += ",\"worst_point\":null";
    } else {
      s += ",\"worst_point\":{\"index\":" + std::to_string(c.worst_index) + ",\"coords\":[";
      for (size_t i = 0; i < c.worst_coords.size(); ++i) {
        if (i) s += ",";
        s += num(c.worst_coords[i]);
      }
      s += "]}";
    }
    s += "}";
  }
  s += "]}";
  return s;
}

std::string emit_report_text(const ReportHeader& hdr, const std::vector<CheckReport>& checks) {
  char line[256];
  std::string s;
  std::snprintf(line, sizeof line, "scenario %s  seed %llu  points %d  tol %g\n",
                hdr.scenario.c_str(), static_cast<unsigned long long>(hdr.seed), hdr.points,
                hdr.tol);
  s += line;
  size_t width = 4;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  std::snprintf(line, sizeof line, "%-*s  %-14s  %-22s  %-22s\n", static_cast<int>(width), "name",
                "verdict", "max", "mean");
  s += line;
  for (const auto& c : checks) {
    if (c.verdict == Verdict::NotApplicable) {
      std::snprintf(line, sizeof line, "%-*s  %-14s  %-22s  %-22s\n", static_cast<int>(width),
                    c.name.c_str(), verdict_name(c.verdict), "-", "-");
    } else {
      std::snprintf(line, sizeof line, "%-*s  %-14s  %-22.17g  %-22.17g\n",
                    static_cast<int>(width), c.name.c_str(), verdict_name(c.verdict), c.max,
                    c.mean);
    }
    s += line;
  }
  return s;
}

}  // namespace phm
