// The scenario catalog: explicit charts, maps and structures on which every
// condition the engine checks has a decisively positive or negative answer.

#pragma once

#include "phm/constructions.hpp"

namespace phm {

struct CatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> catalog_ids();

// Builds the scenario, binding parameters (validated against documented
// ranges).  When `verify`, every expected flag is re-derived on a small
// deterministic sample; a mismatch throws EngineInconsistencyError.
Scenario catalog_lookup(const std::string& id, const std::map<std::string, double>& params = {},
                        bool verify = true);

// One-paragraph description plus parameter documentation.
std::string catalog_doc(const std::string& id);

}  // namespace phm
