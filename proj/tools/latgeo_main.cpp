// latgeo: run geodesic-flow scenarios on the lattice line and write plot-ready CSV.

#include <cstdlib>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latgeo/scenario.hpp"

namespace {

using latgeo::ConfigError;
using latgeo::ScenarioConfig;

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("expected key=value, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

void apply_overrides(ScenarioConfig& cfg, const std::vector<std::string>& sets) {
  for (const auto& s : sets) {
    const auto [key, value] = split_assignment(s);
    latgeo::apply_setting(cfg, key, value);
  }
  if (const char* dir = std::getenv("OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    cfg.output_dir = dir;
  }
  latgeo::validate(cfg);
}

void report(const std::string& label, const latgeo::RunOutcome& outcome) {
  for (const auto& w : outcome.warnings) std::cerr << "warning: " << label << ": " << w << '\n';
  if (outcome.exit_code == latgeo::kExitValidation) {
    std::cerr << "error: " << label << ": " << outcome.diagnostics.value("error", "invalid config")
              << '\n';
    return;
  }
  std::cout << label << ": " << outcome.diagnostics.value("status", "?") << ", s = "
            << outcome.diagnostics.value("final_s", 0.0) << ", max norm drift = "
            << outcome.diagnostics.value("max_norm_drift", 0.0) << ", peak velocity = "
            << outcome.diagnostics["peak_velocity_estimate"].dump() << '\n';
}

int run_command(const std::string& config_file, const std::string& preset,
                const std::vector<std::string>& sets) {
  ScenarioConfig cfg;
  std::string label;
  if (!preset.empty()) {
    cfg = latgeo::find_preset(preset).config;
    label = preset;
  } else if (!config_file.empty()) {
    cfg = latgeo::load_config(config_file);
    label = config_file;
  } else {
    throw ConfigError("run: give a config file or --preset");
  }
  apply_overrides(cfg, sets);
  const latgeo::RunOutcome outcome = latgeo::run_scenario(cfg);
  report(label, outcome);
  if (outcome.exit_code != latgeo::kExitValidation) {
    std::cout << "wrote " << cfg.output_dir << "/{fields.csv,summary.csv,run.json}\n";
  }
  return outcome.exit_code;
}

int sweep_command(const std::string& config_file, const std::vector<std::string>& sets,
                  const std::vector<std::string>& varies) {
  ScenarioConfig base = latgeo::load_config(config_file);
  apply_overrides(base, sets);

  // Cartesian product of all --vary axes.
  std::vector<std::pair<ScenarioConfig, std::string>> variants{{base, ""}};
  for (const auto& v : varies) {
    const auto [key, list] = split_assignment(v);
    std::vector<std::string> values;
    std::size_t pos = 0;
    while (true) {
      const auto comma = list.find(',', pos);
      values.push_back(list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    std::vector<std::pair<ScenarioConfig, std::string>> next;
    for (const auto& [cfg, name] : variants) {
      for (const auto& value : values) {
        ScenarioConfig c = cfg;
        latgeo::apply_setting(c, key, value);
        next.emplace_back(std::move(c), (name.empty() ? "" : name + "__") + key + "=" + value);
      }
    }
    variants = std::move(next);
  }
  for (auto& [cfg, name] : variants) {
    cfg.output_dir = (std::filesystem::path(base.output_dir) / name).string();
    latgeo::validate(cfg);
  }

  std::vector<std::future<latgeo::RunOutcome>> jobs;
  for (const auto& variant : variants) {
    jobs.push_back(std::async(std::launch::async,
                              [cfg = variant.first] { return latgeo::run_scenario(cfg); }));
  }
  int code = latgeo::kExitOk;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const latgeo::RunOutcome outcome = jobs[k].get();
    report(variants[k].second, outcome);
    code = std::max(code, outcome.exit_code);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum geodesic flow on the integer lattice line"};
  app.require_subcommand(1);

  std::string config_file;
  std::string preset;
  std::vector<std::string> sets;
  std::vector<std::string> varies;

  auto* run = app.add_subcommand("run", "Run one scenario from a config file or a preset");
  run->add_option("config", config_file, "Config file (key = value document or run.json)");
  run->add_option("--preset", preset, "Preset name (see list-presets)");
  run->add_option("--set", sets, "Override a config key, e.g. --set flow.r=2");

  auto* list = app.add_subcommand("list-presets", "List built-in scenarios");

  auto* sweep = app.add_subcommand("sweep", "Run variants of a config concurrently");
  sweep->add_option("config", config_file, "Base config file")->required();
  sweep->add_option("--vary", varies, "key=v1,v2,... (repeatable)")->required();
  sweep->add_option("--set", sets, "Override a config key before sweeping");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& p : latgeo::presets()) std::cout << p.name << "\t" << p.description << '\n';
      return latgeo::kExitOk;
    }
    if (run->parsed()) return run_command(config_file, preset, sets);
    if (sweep->parsed()) return sweep_command(config_file, sets, varies);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return latgeo::kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return latgeo::kExitValidation;
  }
  return latgeo::kExitOk;
}
