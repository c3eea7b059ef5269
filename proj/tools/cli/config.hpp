#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "memkernel/catalog.hpp"
#include "memkernel/energy.hpp"

namespace memkernel::cli {

/// One run, parsed and validated before any computation.
///   surface    {"kind": tag, parameters..., "sampled": bool}
///   grid       {"n1": int, "n2": int}
///   model      [{"term": tag, parameters...}, ...]
///   variation  {"kind": tag, parameters...} (optional)
///   levels     refinement sizes for convergence tables
///   tolerance  overrides for the declared bounds
struct RunConfig {
  SurfaceDef surface;
  bool sampled = false;
  int n1 = 64, n2 = 64;
  EnergyModel model;
  std::optional<VariationDef> variation;
  std::vector<int> levels;
  std::uint64_t seed = 1;
  nlohmann::json tolerance = nlohmann::json::object();
  nlohmann::json echo;

  double bound(const std::string& key, double fallback) const;
};

/// Throws Error(ConfigError) naming the offending key path.
RunConfig parse_config(const nlohmann::json& doc, const std::string& command);
RunConfig load_config(const std::string& path, const std::string& command);

ScalarProfile parse_profile(const nlohmann::json& j, const std::string& path);

/// Registered tags with their parameter names, as listed by the catalog command.
nlohmann::json registry();

}  // namespace memkernel::cli
