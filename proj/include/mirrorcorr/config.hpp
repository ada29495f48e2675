#pragma once

#include "json.hpp"
#include <filesystem>
#include <optional>
#include <string>

#include "mirrorcorr/model.hpp"

namespace mirrorcorr {

// Run configuration, read from a JSON object with keys
//   units ("natural" | "si"), m, omega0, L0, n_modes     (required)
//   uv_cutoff, lambda                                   (optional)
// Any other key is rejected.
struct RunConfig {
  UnitSystem units = UnitSystem::natural;
  double m = 1.0;
  double omega0 = 1.0;
  double L0 = 1.0;
  int n_modes = 1;
  std::optional<double> uv_cutoff;
  double lambda = 1.0;

  PhysicalParams params() const;
  ModeSet modes() const;
  CouplingModel coupling_model() const;
  nlohmann::json to_json() const;
};

// Throws ConfigError naming the offending key.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace mirrorcorr
