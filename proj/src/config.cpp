#include "mirrorcorr/config.hpp"

#include <fstream>
#include <sstream>

#include "mirrorcorr/errors.hpp"

namespace mirrorcorr {

namespace {

double number_field(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

PhysicalParams RunConfig::params() const {
  return units == UnitSystem::natural ? PhysicalParams::natural(m, omega0, L0)
                                      : PhysicalParams::si(m, omega0, L0);
}

ModeSet RunConfig::modes() const { return ModeSet(params(), n_modes, uv_cutoff); }

CouplingModel RunConfig::coupling_model() const { return {params(), lambda}; }

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = {{"units", units == UnitSystem::natural ? "natural" : "si"},
                      {"m", m},
                      {"omega0", omega0},
                      {"L0", L0},
                      {"n_modes", n_modes},
                      {"lambda", lambda}};
  if (uv_cutoff) j["uv_cutoff"] = *uv_cutoff;
  return j;
}

RunConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const char* const known[] = {"units", "m", "omega0", "L0", "n_modes", "uv_cutoff",
                                      "lambda"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw ConfigError("unknown config key '" + item.key() + "'");
  }
  for (const char* k : {"units", "m", "omega0", "L0", "n_modes"}) {
    if (!j.contains(k)) throw ConfigError(std::string("missing required config key '") + k + "'");
  }

  RunConfig cfg;
  const auto& units = j.at("units");
  if (units == "natural") {
    cfg.units = UnitSystem::natural;
  } else if (units == "si") {
    cfg.units = UnitSystem::si;
  } else {
    throw ConfigError("config key 'units' must be \"natural\" or \"si\"");
  }
  cfg.m = number_field(j, "m");
  cfg.omega0 = number_field(j, "omega0");
  cfg.L0 = number_field(j, "L0");
  const auto& n = j.at("n_modes");
  if (!n.is_number_integer() || n.get<long long>() < 1) {
    throw ConfigError("config key 'n_modes' must be a positive integer");
  }
  cfg.n_modes = n.get<int>();
  if (j.contains("uv_cutoff")) cfg.uv_cutoff = number_field(j, "uv_cutoff");
  if (j.contains("lambda")) cfg.lambda = number_field(j, "lambda");

  try {
    cfg.params();
    if (cfg.uv_cutoff && !(*cfg.uv_cutoff > 0.0)) throw DomainError("uv_cutoff must be positive");
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace mirrorcorr
