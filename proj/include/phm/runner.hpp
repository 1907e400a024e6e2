// Check orchestration: deterministic sampling, per-point evaluation of every
// requested check, aggregation, and the cross-route consistency rules.

#pragma once

#include "phm/catalog.hpp"
#include "phm/report.hpp"

namespace phm {

struct RunConfig {
  std::string scenario_name;  // catalog id or "inline"
  Scenario scenario;
  std::vector<std::string> checks;
  int points = 200;
  uint64_t seed = 7;
  double tol = 1e-8;
  double fail_threshold = 0.1;
  std::string format = "text";  // "json" | "text"
  int threads = 1;
};

// All registered check names, in canonical order.
const std::vector<std::string>& check_registry();

// Operation coverage table: check name -> spec operations it reaches.
// Used by the registry test that every equation/theorem-backed operation is
// reachable from at least one check.
const std::vector<std::pair<std::string, std::vector<std::string>>>& check_operation_map();

// Runs every configured check on the scenario.  Deterministic for a given
// (scenario, seed, points) regardless of the worker count.  Route
// disagreements (battery vs structural PHM, normality three-way, CR vs
// normality, superminimality implication) raise EngineInconsistencyError.
std::vector<CheckReport> run_checks(const RunConfig& cfg);

std::string emit_report(const RunConfig& cfg, const std::vector<CheckReport>& checks);

}  // namespace phm
