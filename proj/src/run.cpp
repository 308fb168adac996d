#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "latgeo/scenario.hpp"

#ifndef LATGEO_VERSION
#define LATGEO_VERSION "0.0.0"
#endif

namespace latgeo {

namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
/// Boundary density above this fraction of the norm triggers the seam warning.
constexpr double kSeamFraction = 1e-10;

RealFunction to_array(const std::vector<double>& v) {
  return Eigen::Map<const RealFunction>(v.data(), static_cast<Eigen::Index>(v.size()));
}

EdgeMetric make_metric(const ScenarioConfig& c) {
  switch (c.metric_kind) {
    case MetricKind::explicit_values:
      return EdgeMetric(to_array(c.metric_values));
    case MetricKind::geometric_open:
      return EdgeMetric::geometric(c.lattice_size, c.metric_g0, c.metric_lambda);
    case MetricKind::constant:
      break;
  }
  return EdgeMetric::constant(c.lattice_size, c.metric_g0);
}

RealFunction gaussian(long n, double center, double width, double height) {
  RealFunction out(n);
  for (long i = 0; i < n; ++i) {
    const double d = static_cast<double>(i) - center;
    out(i) = height * std::exp(-d * d / (2.0 * width * width));
  }
  return out;
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_fields(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path);
  out << "s,i,theta,kappa,re_psi,im_psi,abs2_psi\n";
  for (const Sample& smp : traj.samples) {
    const std::string s = format_number(smp.s);
    for (Eigen::Index i = 0; i < smp.psi.size(); ++i) {
      out << s << ',' << i << ',' << format_number(smp.theta(i)) << ','
          << format_number(smp.kappa(i).real()) << ',' << format_number(smp.psi(i).real()) << ','
          << format_number(smp.psi(i).imag()) << ',' << format_number(std::norm(smp.psi(i)))
          << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

double tracked_peak(const Observers& obs, TrackTarget track) {
  return track == TrackTarget::theta ? obs.theta_peak : obs.psi_peak;
}

void write_summary(const std::filesystem::path& path, const Trajectory& traj, TrackTarget track,
                   Eigen::Index n_sites) {
  std::ofstream out(path);
  out << "s,norm,norm_drift,imag_mass,peak_pos,peak_velocity_estimate,max_aux_residual,"
         "max_reality_residual\n";
  std::vector<double> times;
  std::vector<double> peaks;
  const double n0 = traj.samples.empty() ? 0.0 : traj.samples.front().obs.norm;
  for (const Sample& smp : traj.samples) {
    times.push_back(smp.s);
    peaks.push_back(tracked_peak(smp.obs, track));
    // Running estimate over the middle of [s0, s] seen so far.
    const double velocity = peak_velocity(times, peaks, n_sites);
    const double drift = n0 > 0.0 ? (smp.obs.norm - n0) / n0 : 0.0;
    out << format_number(smp.s) << ',' << format_number(smp.obs.norm) << ','
        << format_number(drift) << ',' << format_number(smp.obs.imaginary_mass) << ','
        << format_number(peaks.back()) << ',' << format_number(velocity) << ','
        << format_number(smp.obs.max_aux_residual) << ','
        << format_number(smp.obs.max_reality_residual) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

InitialCondition make_initial_state(const ScenarioConfig& c) {
  validate(c);
  const long n = c.lattice_size;
  EdgeMetric metric = make_metric(c);
  Measure mu = c.measure_kind == MeasureKind::explicit_values ? Measure(to_array(c.measure_values))
                                                              : Measure::from_metric(metric);

  RealFunction theta = c.theta_kind == ThetaKind::gaussian
                           ? gaussian(n, c.theta_center, c.theta_width, c.theta_height)
                           : RealFunction::Constant(n, c.theta_value);

  Amplitude psi(n);
  switch (c.psi_kind) {
    case PsiKind::gaussian:
      psi = gaussian(n, c.psi_center, c.psi_width, 1.0).cast<Complex>();
      break;
    case PsiKind::plane_wave: {
      const double k = 2.0 * std::numbers::pi * static_cast<double>(c.psi_k_index) /
                       static_cast<double>(n);
      for (long i = 0; i < n; ++i) psi(i) = std::polar(1.0, k * static_cast<double>(i));
      break;
    }
    case PsiKind::explicit_values:
      for (long i = 0; i < n; ++i) {
        const double im = c.psi_imag_values.empty() ? 0.0 : c.psi_imag_values[i];
        psi(i) = Complex(c.psi_values[i], im);
      }
      break;
  }

  const double raw = norm(psi, mu);
  if (c.psi_normalize) {
    if (!(raw > 0.0) || !std::isfinite(raw)) {
      throw ConfigError("psi0: cannot normalize a wave function with zero norm");
    }
    psi /= std::sqrt(raw);
  }

  if (c.mode == FlowMode::flat_polar) {
    return {FlowState::flat_polar(PolarVelocity(c.r, std::move(theta)), std::move(psi),
                                  std::move(metric)),
            raw};
  }
  const Window window =
      c.metric_kind == MetricKind::geometric_open ? Window::open : Window::periodic;
  ComplexFunction x_plus = c.r * (Complex(0.0, 1.0) * theta.cast<Complex>()).exp();
  VelocityField x = real_completion(x_plus, mu);
  return {FlowState::generic(std::move(x), std::move(psi), std::move(metric), std::move(mu),
                             window),
          raw};
}

RunOutcome run_scenario(const ScenarioConfig& cfg) {
  RunOutcome outcome;
  const auto t0 = std::chrono::steady_clock::now();

  std::optional<InitialCondition> init;
  try {
    init = make_initial_state(cfg);
  } catch (const ConfigError& e) {
    outcome.exit_code = kExitValidation;
    outcome.diagnostics["error"] = e.what();
    return outcome;
  } catch (const std::invalid_argument& e) {
    outcome.exit_code = kExitValidation;
    outcome.diagnostics["error"] = e.what();
    return outcome;
  }

  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);

  Trajectory traj;
  std::string status = "ok";
  double last_good_s = kNaN;
  try {
    evolve_into(traj, init->state, cfg.ds, cfg.steps, cfg.record_every);
  } catch (const DivergenceError& e) {
    status = "diverged";
    last_good_s = e.last_good_s();
    outcome.exit_code = kExitDivergence;
    outcome.warnings.push_back(e.what());
  }

  // Seam guard: density on the two sites next to the wrap-around.
  const Measure& mu = init->state.measure;
  const Eigen::Index n = init->state.size();
  double seam_s = kNaN;
  for (const Sample& smp : traj.samples) {
    const double edge = std::max(std::norm(smp.psi(0)) * mu(0), std::norm(smp.psi(n - 1)) * mu(n - 1));
    if (edge > kSeamFraction * smp.obs.norm) {
      seam_s = smp.s;
      break;
    }
  }
  if (std::isfinite(seam_s)) {
    outcome.warnings.push_back("seam guard: boundary density exceeds 1e-10 of the norm at s = " +
                               format_number(seam_s));
  }
  if (traj.norm_drift_warning) {
    outcome.warnings.push_back("norm drift " + format_number(traj.max_norm_drift) +
                               " exceeds 1e-6");
  }

  write_fields(dir / "fields.csv", traj);
  write_summary(dir / "summary.csv", traj, cfg.track, n);

  const std::vector<double> times = traj.times();
  std::vector<double> peaks;
  double max_aux = 0.0;
  double max_real = 0.0;
  for (const Sample& smp : traj.samples) {
    peaks.push_back(tracked_peak(smp.obs, cfg.track));
    max_aux = std::isfinite(smp.obs.max_aux_residual) ? std::max(max_aux, smp.obs.max_aux_residual)
                                                      : kNaN;
    max_real = std::max(max_real, smp.obs.max_reality_residual);
  }
  const double velocity = peak_velocity(times, peaks, n);

  json diag = json::object();
  diag["status"] = status;
  diag["final_s"] = traj.samples.empty() ? 0.0 : traj.samples.back().s;
  diag["samples"] = traj.samples.size();
  diag["initial_raw_norm"] = init->raw_norm;
  diag["initial_norm"] = traj.samples.empty() ? 0.0 : traj.samples.front().obs.norm;
  diag["final_norm"] = traj.samples.empty() ? 0.0 : traj.samples.back().obs.norm;
  diag["max_norm_drift"] = traj.max_norm_drift;
  diag["norm_drift_warning"] = traj.norm_drift_warning;
  diag["final_imag_mass"] = traj.samples.empty() ? 0.0 : traj.samples.back().obs.imaginary_mass;
  diag["tracked"] = cfg.track == TrackTarget::theta ? "theta" : "psi";
  diag["peak_velocity_estimate"] = nullable(velocity);
  diag["max_aux_residual"] = nullable(max_aux);
  diag["max_reality_residual"] = nullable(max_real);
  diag["seam_warning"] = std::isfinite(seam_s);
  if (status != "ok") diag["last_good_s"] = last_good_s;
  outcome.diagnostics = diag;

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json run = json::object();
  run["software"] = {{"name", "latgeo"}, {"version", LATGEO_VERSION}};
  run["status"] = status;
  run["exit_code"] = outcome.exit_code;
  run["config"] = to_json(cfg);
  run["wall_clock_seconds"] = wall;
  run["diagnostics"] = diag;
  run["warnings"] = outcome.warnings;
  std::ofstream out(dir / "run.json");
  out << run.dump(2) << '\n';
  return outcome;
}

}  // namespace latgeo
