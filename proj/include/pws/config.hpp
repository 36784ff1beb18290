#pragma once

// Scenario configuration: a strict `key = value` text format.
//
//   # comment
//   scenario = double_slit_dbb
//   N = 2048
//   b = 100
//
// Keys are case sensitive. Every key must be known and used by the chosen
// scenario; unknown keys, duplicates, malformed values and constraint
// violations raise ConfigError citing the line and key. Omitted keys take
// the scenario's documented default (see schema_reference()).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pws/error.hpp"

namespace pws {

enum class ScenarioKind {
  free_gausson,
  uniform_field,
  harmonic_trap,
  double_slit_dbb,
  kg_plane_wave,
  kg_packet,
  entangled_pair,
  equivariance,
};

std::string_view scenario_name(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);
const std::vector<ScenarioKind>& all_scenarios();
// One-line description for list-scenarios.
std::string_view scenario_description(ScenarioKind kind);

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::free_gausson;
  std::string source = "<config>";

  // grid (N points per axis, box length L per axis)
  std::uint64_t N = 256;
  double L = 20.0;
  // time stepping
  double dt = 1e-3;
  double T = 10.0;
  // physics
  double omega0 = 1.0;
  double charge = 1.0;
  double b = 1.0;
  double f0 = 1.0;
  // potentials
  double E = 0.1;       // uniform field strength (vector gauge)
  double trap_k = 0.25; // harmonic spring constant
  // initial state
  double x0 = 0.0;      // soliton centre / trajectory start
  double v0 = 0.0;      // soliton velocity (free_gausson)
  double sigma = 1.0;   // pilot packet width
  double separation = 8.0;
  double k = 0.5;       // pilot wavevector
  double partner_offset = 4.0;
  std::uint64_t ensemble = 2000;
  // output
  std::uint64_t seed = 42;
  std::uint64_t snapshot_every = 0;
  std::string output_dir;

  std::uint64_t steps() const;
  double dx() const { return L / static_cast<double>(N); }
  bool uses(std::string_view key) const;
};

// Defaults for a scenario before any key is applied.
ScenarioConfig scenario_defaults(ScenarioKind kind);

ScenarioConfig parse_config(const std::filesystem::path& path);
ScenarioConfig parse_config_text(std::string_view text, std::string_view source = "<config>");

// Re-check every constraint (used after command-line overrides).
void validate_config(const ScenarioConfig& cfg);

// Resolved `key = value` listing of the keys the scenario uses.
std::string render_config(const ScenarioConfig& cfg);

// Human-readable description of every key, its constraints and defaults.
std::string schema_reference();

}  // namespace pws
