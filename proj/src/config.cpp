#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "latgeo/scenario.hpp"

namespace latgeo {

namespace {

using json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw ConfigError(std::string(key) + ": cannot read '" + std::string(value) + "' as " +
                    std::string(want));
}

double to_double(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || t.empty()) bad_value(key, text, "a number");
  return v;
}

long to_long(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    // Accept integral values written in floating form, e.g. "201.0" from JSON.
    const double d = to_double(key, text);
    if (d != std::floor(d) || std::abs(d) > 9e15) bad_value(key, text, "an integer");
    return static_cast<long>(d);
  }
  return v;
}

bool to_bool(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  bad_value(key, text, "a boolean");
}

std::vector<double> to_list(std::string_view key, std::string_view text) {
  std::string_view t = trim(text);
  if (!t.empty() && t.front() == '[' && t.back() == ']') t = trim(t.substr(1, t.size() - 2));
  std::vector<double> out;
  if (t.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = t.find(',', pos);
    const auto item = t.substr(pos, comma == std::string_view::npos ? t.npos : comma - pos);
    out.push_back(to_double(key, item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <typename Enum>
struct EnumName {
  Enum value;
  const char* name;
};

constexpr EnumName<MetricKind> kMetricKinds[] = {{MetricKind::constant, "constant"},
                                                 {MetricKind::explicit_values, "explicit"},
                                                 {MetricKind::geometric_open, "geometric-open"}};
constexpr EnumName<MeasureKind> kMeasureKinds[] = {{MeasureKind::from_metric, "from-metric"},
                                                   {MeasureKind::explicit_values, "explicit"}};
constexpr EnumName<FlowMode> kFlowModes[] = {{FlowMode::flat_polar, "flat_polar"},
                                             {FlowMode::generic, "generic"}};
constexpr EnumName<ThetaKind> kThetaKinds[] = {{ThetaKind::constant, "constant"},
                                               {ThetaKind::gaussian, "gaussian"}};
constexpr EnumName<PsiKind> kPsiKinds[] = {{PsiKind::gaussian, "gaussian"},
                                           {PsiKind::plane_wave, "plane-wave"},
                                           {PsiKind::explicit_values, "explicit"}};
constexpr EnumName<TrackTarget> kTrackTargets[] = {{TrackTarget::theta, "theta"},
                                                   {TrackTarget::psi, "psi"}};

template <typename Enum, std::size_t K>
Enum to_enum(std::string_view key, std::string_view text, const EnumName<Enum> (&names)[K]) {
  const std::string_view t = trim(text);
  std::string choices;
  for (const auto& e : names) {
    if (t == e.name) return e.value;
    choices += choices.empty() ? "" : "|";
    choices += e.name;
  }
  bad_value(key, text, "one of " + choices);
}

template <typename Enum, std::size_t K>
const char* enum_name(Enum v, const EnumName<Enum> (&names)[K]) {
  for (const auto& e : names) {
    if (e.value == v) return e.name;
  }
  return "?";
}

struct Field {
  std::string key;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<json(const ScenarioConfig&)> get;
};

template <typename T>
Field number_field(std::string key, T ScenarioConfig::*member) {
  Field f;
  f.key = key;
  f.set = [key, member](ScenarioConfig& c, std::string_view v) {
    if constexpr (std::is_same_v<T, long>) {
      c.*member = to_long(key, v);
    } else {
      c.*member = to_double(key, v);
    }
  };
  f.get = [member](const ScenarioConfig& c) { return json(c.*member); };
  return f;
}

Field list_field(std::string key, std::vector<double> ScenarioConfig::*member) {
  return {key, [key, member](ScenarioConfig& c, std::string_view v) { c.*member = to_list(key, v); },
          [member](const ScenarioConfig& c) { return json(c.*member); }};
}

template <typename Enum, std::size_t K>
Field enum_field(std::string key, Enum ScenarioConfig::*member, const EnumName<Enum> (&names)[K]) {
  return {key,
          [key, member, &names](ScenarioConfig& c, std::string_view v) {
            c.*member = to_enum(key, v, names);
          },
          [member, &names](const ScenarioConfig& c) { return json(enum_name(c.*member, names)); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> t;
    t.push_back(number_field("lattice.size", &ScenarioConfig::lattice_size));
    t.push_back(enum_field("metric.kind", &ScenarioConfig::metric_kind, kMetricKinds));
    t.push_back(list_field("metric.values", &ScenarioConfig::metric_values));
    t.push_back(number_field("metric.g0", &ScenarioConfig::metric_g0));
    t.push_back(number_field("metric.lambda", &ScenarioConfig::metric_lambda));
    t.push_back(enum_field("measure.kind", &ScenarioConfig::measure_kind, kMeasureKinds));
    t.push_back(list_field("measure.values", &ScenarioConfig::measure_values));
    t.push_back(enum_field("flow.mode", &ScenarioConfig::mode, kFlowModes));
    t.push_back(number_field("flow.r", &ScenarioConfig::r));
    t.push_back(enum_field("theta0.kind", &ScenarioConfig::theta_kind, kThetaKinds));
    t.push_back(number_field("theta0.center", &ScenarioConfig::theta_center));
    t.push_back(number_field("theta0.width", &ScenarioConfig::theta_width));
    t.push_back(number_field("theta0.height", &ScenarioConfig::theta_height));
    t.push_back(number_field("theta0.value", &ScenarioConfig::theta_value));
    t.push_back(enum_field("psi0.kind", &ScenarioConfig::psi_kind, kPsiKinds));
    t.push_back(number_field("psi0.center", &ScenarioConfig::psi_center));
    t.push_back(number_field("psi0.width", &ScenarioConfig::psi_width));
    t.push_back(number_field("psi0.k_index", &ScenarioConfig::psi_k_index));
    t.push_back(list_field("psi0.values", &ScenarioConfig::psi_values));
    t.push_back(list_field("psi0.imag_values", &ScenarioConfig::psi_imag_values));
    t.push_back({"psi0.normalize",
                 [](ScenarioConfig& c, std::string_view v) {
                   c.psi_normalize = to_bool("psi0.normalize", v);
                 },
                 [](const ScenarioConfig& c) { return json(c.psi_normalize); }});
    t.push_back(number_field("integrator.ds", &ScenarioConfig::ds));
    t.push_back(number_field("integrator.steps", &ScenarioConfig::steps));
    t.push_back(number_field("output.record_every", &ScenarioConfig::record_every));
    t.push_back({"output.dir",
                 [](ScenarioConfig& c, std::string_view v) { c.output_dir = std::string(trim(v)); },
                 [](const ScenarioConfig& c) { return json(c.output_dir); }});
    t.push_back(enum_field("output.track", &ScenarioConfig::track, kTrackTargets));
    return t;
  }();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

std::string json_to_setting(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (const auto& item : v) {
      if (!out.empty()) out += ',';
      out += json_to_setting(item);
    }
    return out;
  }
  return v.dump();
}

void check_positive_list(const std::vector<double>& values, long n, const char* key) {
  if (static_cast<long>(values.size()) != n) {
    throw ConfigError(std::string(key) + ": expected " + std::to_string(n) + " values, got " +
                      std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] <= 0.0) {
      throw ConfigError(std::string(key) + "[" + std::to_string(i) +
                        "] must be finite and positive, got " + format_number(values[i]));
    }
  }
}

void check_positive(double v, const char* key) {
  if (!std::isfinite(v) || v <= 0.0) throw ConfigError(std::string(key) + " must be positive");
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  const Field* f = find_field(trim(key));
  if (f == nullptr) throw ConfigError("unknown key '" + std::string(trim(key)) + "'");
  f->set(cfg, value);
}

void validate(const ScenarioConfig& c) {
  if (c.lattice_size < kMinSites) {
    throw ConfigError("lattice.size must be at least " + std::to_string(kMinSites));
  }
  const long n = c.lattice_size;
  check_positive(c.ds, "integrator.ds");
  if (c.steps < 1) throw ConfigError("integrator.steps must be at least 1");
  if (c.record_every < 1) throw ConfigError("output.record_every must be at least 1");
  if (!std::isfinite(c.r) || c.r < 0.0) throw ConfigError("flow.r must be non-negative");
  if (c.output_dir.empty()) throw ConfigError("output.dir must not be empty");

  switch (c.metric_kind) {
    case MetricKind::constant:
      check_positive(c.metric_g0, "metric.g0");
      break;
    case MetricKind::explicit_values:
      check_positive_list(c.metric_values, n, "metric.values");
      break;
    case MetricKind::geometric_open:
      check_positive(c.metric_g0, "metric.g0");
      check_positive(c.metric_lambda, "metric.lambda");
      break;
  }
  if (c.measure_kind == MeasureKind::explicit_values) {
    check_positive_list(c.measure_values, n, "measure.values");
  }

  if (c.mode == FlowMode::flat_polar) {
    if (c.metric_kind == MetricKind::explicit_values) {
      const auto [lo, hi] = std::minmax_element(c.metric_values.begin(), c.metric_values.end());
      if (*hi - *lo > kRatioTolerance * *hi) {
        throw ConfigError(
            "metric.values: flow.mode = flat_polar needs a divergence-compatible metric, i.e. a "
            "constant ratio derivative, which on a periodic window means constant values");
      }
    }
    if (c.metric_kind == MetricKind::geometric_open && c.metric_lambda != 1.0) {
      throw ConfigError(
          "metric.lambda: flow.mode = flat_polar needs a divergence-compatible metric on the "
          "periodic window (lambda = 1); use flow.mode = generic for open-window diagnostics");
    }
    if (c.measure_kind == MeasureKind::explicit_values) {
      throw ConfigError("measure.kind: flow.mode = flat_polar uses the metric measure");
    }
  }

  if (c.theta_kind == ThetaKind::gaussian) check_positive(c.theta_width, "theta0.width");
  if (c.psi_kind == PsiKind::gaussian) check_positive(c.psi_width, "psi0.width");
  if (c.psi_kind == PsiKind::explicit_values) {
    if (static_cast<long>(c.psi_values.size()) != n) {
      throw ConfigError("psi0.values: expected " + std::to_string(n) + " values");
    }
    if (!c.psi_imag_values.empty() && static_cast<long>(c.psi_imag_values.size()) != n) {
      throw ConfigError("psi0.imag_values: expected " + std::to_string(n) + " values or none");
    }
  }
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig cfg;
  const std::string_view body = trim(text);

  if (!body.empty() && body.front() == '{') {
    json doc;
    try {
      doc = json::parse(body);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("JSON parse error: ") + e.what());
    }
    const json& settings = doc.contains("config") ? doc.at("config") : doc;
    if (!settings.is_object()) throw ConfigError("JSON config must be an object");
    for (const auto& [key, value] : settings.items()) apply_setting(cfg, key, json_to_setting(value));
    validate(cfg);
    return cfg;
  }

  std::string section;
  std::vector<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const auto comment = line.find_first_of("#;");
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    const auto indent = line.find_first_not_of(" \t\r");
    if (indent == std::string_view::npos) continue;
    const std::string where =
        "line " + std::to_string(line_no) + ", column " + std::to_string(indent + 1) + ": ";

    const std::string_view content = trim(line);
    if (content.front() == '[') {
      if (content.back() != ']' || content.size() < 3) {
        throw ConfigError(where + "malformed section header");
      }
      section = std::string(trim(content.substr(1, content.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string_view raw_key = trim(line.substr(0, eq));
    if (raw_key.empty()) throw ConfigError(where + "missing key before '='");
    const std::string key = section.empty() ? std::string(raw_key) : section + "." + std::string(raw_key);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw ConfigError(where + "duplicate key '" + key + "'");
    }
    seen.push_back(key);
    try {
      apply_setting(cfg, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

nlohmann::ordered_json to_json(const ScenarioConfig& cfg) {
  json out = json::object();
  for (const auto& f : fields()) out[f.key] = f.get(cfg);
  return out;
}

std::string to_config_text(const ScenarioConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) {
    const json v = f.get(cfg);
    std::string text;
    if (v.is_number_float()) {
      text = format_number(v.get<double>());
    } else if (v.is_array()) {
      for (const auto& item : v) {
        if (!text.empty()) text += ", ";
        text += format_number(item.get<double>());
      }
    } else {
      text = json_to_setting(v);
    }
    out += f.key + " = " + text + "\n";
  }
  return out;
}

}  // namespace latgeo
