// Run configuration: catalog references or inline charts/maps given by
// expression matrices, check selection, sampling and tolerance settings.

#pragma once

#include <json.hpp>

#include "phm/runner.hpp"

namespace phm {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Validates and resolves a JSON-compatible document into a RunConfig.
// Inline metrics are probed for symmetry and positive definiteness at sampled
// points; violations are reported with the offending field path.
RunConfig load_config(const nlohmann::json& doc);

}  // namespace phm
