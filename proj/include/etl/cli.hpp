#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "etl/einstein.hpp"

namespace etl::cli {

struct MeshSpec {
  std::string path = "mesh.csv";
  int s_points = 100;
  int v_points = 60;
};

struct Outputs {
  std::optional<std::string> report;
  std::optional<std::string> solve;
  std::optional<std::string> margins;
  std::optional<std::string> profile;
  std::optional<std::string> oracle;
  std::optional<std::string> comparison;
  std::optional<MeshSpec> mesh;
};

/// A fully constructed scenario: the structure plus run parameters.
struct Scenario {
  std::optional<EinsteinTypeStructure> structure;
  double verify_tol = 1e-6;
  double oracle_rel_tol = 1e-5;
  int oracle_points = 20;
  double oracle_step = 1e-4;
  Outputs outputs;
};

/// Build a scenario from the JSON configuration. Throws ConfigError with the
/// offending key on malformed input.
Scenario scenario_from_json(const nlohmann::json& config);
Scenario load_scenario(const std::string& path);

/// Re-gate the tau reports for --convention A|B|both ("both" passes when
/// either convention does).
void apply_tau_convention(ResidualReport& report, const std::string& convention);

/// Entry point shared by the binary and the tests. Returns the process exit
/// code: 0 success, 1 verification failure, 2 configuration error,
/// 3 numerical failure.
int run(int argc, const char* const* argv);

}  // namespace etl::cli
