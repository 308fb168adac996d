#pragma once

// Scenario configuration, presets and the run driver behind the CLI.
//
// A config document is a list of `key = value` lines, optionally grouped by
// `[section]` headers; `[flow]` followed by `r = 3` is the same as `flow.r = 3`.
// `#` and `;` start comments. Lists are comma separated. A JSON object (for
// example a run.json written by a previous run) is accepted too: its "config"
// member, or the object itself, maps dotted keys to values.

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "latgeo/evolution.hpp"

namespace latgeo {

/// Malformed document (with line/column) or a field that fails validation
/// (with the field name).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MetricKind { constant, explicit_values, geometric_open };
enum class MeasureKind { from_metric, explicit_values };
enum class ThetaKind { constant, gaussian };
enum class PsiKind { gaussian, plane_wave, explicit_values };
enum class TrackTarget { theta, psi };

struct ScenarioConfig {
  long lattice_size = 201;

  MetricKind metric_kind = MetricKind::constant;
  std::vector<double> metric_values;
  double metric_g0 = 1.0;
  double metric_lambda = 1.0;

  MeasureKind measure_kind = MeasureKind::from_metric;
  std::vector<double> measure_values;

  FlowMode mode = FlowMode::flat_polar;
  double r = 3.0;

  ThetaKind theta_kind = ThetaKind::gaussian;
  double theta_center = 50.0;
  double theta_width = 8.0;
  double theta_height = 1.0;
  double theta_value = 0.0;

  PsiKind psi_kind = PsiKind::gaussian;
  double psi_center = 25.0;
  double psi_width = 6.0;
  long psi_k_index = 0;  ///< plane wave e^{ik i} with k = 2π k_index / N
  std::vector<double> psi_values;
  std::vector<double> psi_imag_values;
  bool psi_normalize = true;

  double ds = 1e-3;
  long steps = 15000;
  long record_every = 100;
  std::string output_dir = "out";
  TrackTarget track = TrackTarget::theta;
};

/// Every accepted key, in serialization order.
const std::vector<std::string>& config_keys();

/// Sets one dotted key from its text form. Throws ConfigError naming the key.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Checks cross-field invariants. Throws ConfigError naming the field.
void validate(const ScenarioConfig& cfg);

/// Parses a key/value or JSON document on top of the defaults, then validates.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Resolved config as a JSON object keyed by dotted names.
nlohmann::ordered_json to_json(const ScenarioConfig& cfg);
/// Resolved config as a key/value document that parse_config reads back.
std::string to_config_text(const ScenarioConfig& cfg);

struct Preset {
  std::string name;
  std::string description;
  ScenarioConfig config;
};

const std::vector<Preset>& presets();
/// Throws ConfigError for an unknown name.
const Preset& find_preset(std::string_view name);

struct InitialCondition {
  FlowState state;
  double raw_norm = 0.0;  ///< ∫|ψ₀|² before optional normalization.
};

InitialCondition make_initial_state(const ScenarioConfig& cfg);

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitDivergence = 3 };

struct RunOutcome {
  int exit_code = kExitOk;
  nlohmann::ordered_json diagnostics;
  std::vector<std::string> warnings;
};

/// Integrates the scenario and writes fields.csv, summary.csv and run.json to
/// cfg.output_dir. Returns kExitDivergence (and still writes the samples
/// recorded so far) if the integration blows up.
RunOutcome run_scenario(const ScenarioConfig& cfg);

/// Decimal text with 17 significant digits and a "." separator, independent
/// of the global locale.
std::string format_number(double value);

}  // namespace latgeo
