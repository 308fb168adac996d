#include <doctest.h>

#include <string>

#include "latgeo/scenario.hpp"

using namespace latgeo;

namespace {

std::string error_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("empty document gives the defaults") {
  const ScenarioConfig cfg = parse_config("");
  CHECK(cfg.lattice_size == 201);
  CHECK(cfg.r == 3.0);
  CHECK(cfg.mode == FlowMode::flat_polar);
  CHECK(cfg.theta_center == 50.0);
  CHECK(cfg.theta_width == 8.0);
  CHECK(cfg.theta_height == 1.0);
  CHECK(cfg.psi_center == 25.0);
  CHECK(cfg.psi_width == 6.0);
  CHECK(cfg.ds == 1e-3);
  CHECK(to_config_text(cfg) == to_config_text(ScenarioConfig{}));
  CHECK(to_config_text(parse_config("# only a comment\n\n   ; another\n")) ==
        to_config_text(ScenarioConfig{}));
}

TEST_CASE("sections, comments and lists") {
  const ScenarioConfig cfg = parse_config(
      "output.dir = somewhere\n"
      "[lattice]\nsize = 5\n"
      "[metric]\nkind = explicit   # periodic values\nvalues = 2, 2, 2, 2, 2\n"
      "[flow]\nr = 1.5\n");
  CHECK(cfg.lattice_size == 5);
  CHECK(cfg.metric_kind == MetricKind::explicit_values);
  CHECK(cfg.metric_values == std::vector<double>{2, 2, 2, 2, 2});
  CHECK(cfg.r == 1.5);
  CHECK(cfg.output_dir == "somewhere");
  // A dotted key inside a section is still prefixed with the section.
  CHECK(contains(error_of("[flow]\nflow.r = 2\n"), "flow.flow.r"));
}

TEST_CASE("zero metric value is rejected with its index") {
  const std::string err =
      error_of("lattice.size = 4\nflow.mode = generic\nmetric.kind = explicit\nmetric.values = 1, 1, 0, 1\n");
  CHECK(contains(err, "metric.values[2]"));
  CHECK(contains(err, "positive"));
}

TEST_CASE("flat_polar needs a divergence-compatible metric") {
  const std::string err = error_of("lattice.size = 4\nmetric.kind = explicit\nmetric.values = 1, 2, 1, 2\n");
  CHECK(contains(err, "divergence-compatible"));
  CHECK(contains(err, "flat_polar"));

  CHECK(contains(error_of("metric.kind = geometric-open\nmetric.lambda = 1.2\n"), "divergence-compatible"));
  CHECK_NOTHROW(parse_config("lattice.size = 3\nmetric.kind = explicit\nmetric.values = 4, 4, 4\n"));
  CHECK_NOTHROW(parse_config("flow.mode = generic\nmetric.kind = geometric-open\nmetric.lambda = 1.2\n"));
  CHECK(contains(error_of("measure.kind = explicit\nlattice.size = 3\nmeasure.values = 1,2,3\n"),
                 "measure.kind"));
}

TEST_CASE("malformed documents report line and column") {
  CHECK(contains(error_of("flow.r = 2\n  bogus line\n"), "line 2, column 3"));
  CHECK(contains(error_of("\n\nflow.r = two\n"), "line 3, column 1"));
  CHECK(contains(error_of("\n\nflow.r = two\n"), "flow.r"));
  CHECK(contains(error_of("[flow\n"), "section header"));
  CHECK(contains(error_of("flow.r = 1\nflow.r = 2\n"), "duplicate"));
  CHECK(contains(error_of("= 3\n"), "missing key"));
  CHECK(contains(error_of("flow.speed = 3\n"), "unknown key 'flow.speed'"));
  CHECK(contains(error_of("flow.mode = curved\n"), "flat_polar|generic"));
  CHECK(contains(error_of("lattice.size = 2\n"), "lattice.size"));
  CHECK(contains(error_of("lattice.size = 20.5\n"), "integer"));
  CHECK(contains(error_of("integrator.ds = -1\n"), "integrator.ds"));
  CHECK(contains(error_of("flow.r = -1\n"), "flow.r"));
  CHECK(contains(error_of("{ \"flow.r\": }"), "JSON"));
  CHECK(contains(error_of("lattice.size = 4\npsi0.kind = explicit\npsi0.values = 1, 2\n"), "psi0.values"));
}

TEST_CASE("apply_setting") {
  ScenarioConfig cfg;
  apply_setting(cfg, "flow.r", "2.5");
  apply_setting(cfg, "output.track", "psi");
  apply_setting(cfg, "psi0.normalize", "false");
  apply_setting(cfg, "theta0.kind", " constant ");
  CHECK(cfg.r == 2.5);
  CHECK(cfg.track == TrackTarget::psi);
  CHECK_FALSE(cfg.psi_normalize);
  CHECK(cfg.theta_kind == ThetaKind::constant);
  CHECK_THROWS_AS(apply_setting(cfg, "nope", "1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(cfg, "integrator.steps", "many"), ConfigError);
  CHECK(config_keys().size() == 26);
}

TEST_CASE("JSON and text round trips") {
  ScenarioConfig cfg;
  cfg.lattice_size = 7;
  cfg.mode = FlowMode::generic;
  cfg.metric_kind = MetricKind::explicit_values;
  cfg.metric_values = {1.0, 1.1, 0.9, 1.0 / 3.0, 2.0, 1.0, 1e-3};
  cfg.r = 0.1 + 0.2;
  cfg.psi_kind = PsiKind::plane_wave;
  cfg.psi_k_index = 2;
  cfg.ds = 1e-3 / 3.0;
  cfg.steps = 12;
  cfg.output_dir = "out/x y";
  validate(cfg);

  const std::string text = to_config_text(cfg);
  CHECK(to_config_text(parse_config(text)) == text);

  const std::string as_json = to_json(cfg).dump();
  CHECK(to_config_text(parse_config(as_json)) == text);
  nlohmann::ordered_json wrapped;
  wrapped["status"] = "ok";
  wrapped["config"] = to_json(cfg);
  const ScenarioConfig back = parse_config(wrapped.dump(2));
  CHECK(back.r == cfg.r);
  CHECK(back.ds == cfg.ds);
  CHECK(back.metric_values == cfg.metric_values);
  CHECK(back.output_dir == cfg.output_dir);
}

TEST_CASE("presets") {
  CHECK(presets().size() == 6);
  for (const Preset& p : presets()) {
    CHECK_NOTHROW(validate(p.config));
    CHECK(p.config.output_dir == "out/" + p.name);
    CHECK(to_config_text(parse_config(to_config_text(p.config))) == to_config_text(p.config));
  }
  CHECK(find_preset("fig1-theta-flow").config.track == TrackTarget::theta);
  CHECK(find_preset("fig2-amplitude").config.track == TrackTarget::psi);
  CHECK(find_preset("stationary-control").config.r == 0.0);
  CHECK_THROWS_AS(find_preset("fig3"), ConfigError);
}

TEST_CASE("format_number") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-2.5e-20) == "-2.4999999999999999e-20");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  for (double v : {0.1 + 0.2, 1.0 / 3.0, 6.02214076e23, -1e-300}) {
    CHECK(std::stod(format_number(v)) == v);
  }
}
