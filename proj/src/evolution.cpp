#include "latgeo/evolution.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace latgeo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Time derivative of every evolving component. Unused members stay empty.
struct Rates {
  RealFunction theta;
  ComplexFunction x_plus;
  ComplexFunction x_minus;
  Amplitude psi;
};

Rates rates(const FlowState& y) {
  Rates k;
  if (y.mode() == FlowMode::flat_polar) {
    const PolarVelocity& p = y.polar();
    const RealFunction kappa = kappa_polar(p);
    k.theta = theta_rhs(p);
    k.psi = amplitude_rhs_polar(y.psi, p, kappa);
  } else {
    const VelocityField& x = y.field();
    const ComponentPair dx = velocity_rhs_generic(x, y.metric, y.measure);
    k.x_plus = dx.plus;
    k.x_minus = dx.minus;
    k.psi = amplitude_rhs(y.psi, x, kappa_general(x, y.measure));
  }
  return k;
}

// y + h * k, without touching s. The velocity is rebuilt member-wise so the
// validating constructors are not re-run on every stage.
FlowState advance(const FlowState& y, const Rates& k, double h) {
  FlowState out = y;
  if (out.mode() == FlowMode::flat_polar) {
    std::get<PolarVelocity>(out.velocity).theta += h * k.theta;
  } else {
    auto& x = std::get<VelocityField>(out.velocity);
    x.x_plus += h * k.x_plus;
    x.x_minus += h * k.x_minus;
  }
  out.psi += h * k.psi;
  return out;
}

template <typename Derived>
bool runaway(const Eigen::ArrayBase<Derived>& v) {
  if (v.size() == 0) return false;
  return !v.allFinite() || v.abs().maxCoeff() > kDivergenceThreshold;
}

void check_divergence(const FlowState& y, double last_good_s) {
  bool bad = runaway(y.psi);
  if (y.mode() == FlowMode::flat_polar) {
    bad = bad || runaway(y.polar().theta);
  } else {
    bad = bad || runaway(y.field().x_plus) || runaway(y.field().x_minus);
  }
  if (bad) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "integration diverged after s = " << last_good_s
        << " (non-finite value or magnitude above " << kDivergenceThreshold << ")";
    throw DivergenceError(msg.str(), last_good_s);
  }
}

double max_over(const ComplexFunction& v, SiteRange sites) {
  if (sites.count() == 0) return kNaN;
  return v.segment(sites.first, sites.count()).abs().maxCoeff();
}

template <typename Profile>
double safe_peak(const Profile& profile) {
  try {
    return peak_position(profile);
  } catch (const PreconditionError&) {
    return kNaN;
  }
}

Sample make_sample(const FlowState& y) {
  Sample smp;
  smp.s = y.s;
  smp.theta = y.theta();
  if (y.mode() == FlowMode::generic) {
    smp.x_plus = y.field().x_plus;
    smp.x_minus = y.field().x_minus;
  }
  smp.kappa = y.kappa();
  smp.psi = y.psi;
  smp.obs = observe(y);
  return smp;
}

using Stepper = FlowState (*)(const FlowState&, double);

void integrate_into(Trajectory& out, const FlowState& state0, double ds, long n_steps,
                    long record_every, Stepper step) {
  if (!(ds > 0.0)) throw PreconditionError("evolve: ds must be positive");
  if (n_steps < 1) throw PreconditionError("evolve: n_steps must be at least 1");
  if (record_every < 1) throw PreconditionError("evolve: record_every must be at least 1");

  const double s0 = state0.s;
  auto record = [&out](const FlowState& y) {
    out.samples.push_back(make_sample(y));
    const double n0 = out.samples.front().obs.norm;
    const double drift = n0 > 0.0 ? std::abs(out.samples.back().obs.norm - n0) / n0 : 0.0;
    out.max_norm_drift = std::max(out.max_norm_drift, drift);
    out.norm_drift_warning = out.max_norm_drift > kNormDriftWarning;
  };

  FlowState y = state0;
  record(y);
  for (long k = 0; k < n_steps; ++k) {
    y = step(y, ds);
    // s from the step count, so matched samples of rescaled runs line up exactly.
    y.s = s0 + static_cast<double>(k + 1) * ds;
    if ((k + 1) % record_every == 0 || k + 1 == n_steps) record(y);
  }
}

}  // namespace

FlowState FlowState::flat_polar(PolarVelocity p, Amplitude psi, EdgeMetric metric) {
  require_same_size(p.size(), psi.size(), "FlowState::flat_polar");
  require_same_size(p.size(), metric.size(), "FlowState::flat_polar");
  const auto ratio = constant_ratio(metric, kRatioTolerance, Window::periodic);
  if (!ratio || std::abs(*ratio - 1.0) > kRatioTolerance) {
    throw PreconditionError(
        "flat_polar mode needs a divergence-compatible (constant) metric on the periodic window");
  }
  Measure mu = Measure::from_metric(metric);
  return FlowState{0.0, std::move(p), std::move(psi), std::move(metric), std::move(mu),
                   Window::periodic};
}

FlowState FlowState::generic(VelocityField x, Amplitude psi, EdgeMetric metric, Measure measure,
                             Window window) {
  require_same_size(x.size(), psi.size(), "FlowState::generic");
  require_same_size(x.size(), metric.size(), "FlowState::generic");
  require_same_size(x.size(), measure.size(), "FlowState::generic");
  return FlowState{0.0, std::move(x), std::move(psi), std::move(metric), std::move(measure),
                   window};
}

VelocityField FlowState::components() const {
  if (mode() == FlowMode::flat_polar) return polar_to_field(polar());
  return field();
}

ComplexFunction FlowState::kappa() const {
  if (mode() == FlowMode::flat_polar) return kappa_polar(polar()).cast<Complex>();
  return kappa_general(field(), measure);
}

RealFunction FlowState::theta() const {
  if (mode() == FlowMode::flat_polar) return polar().theta;
  return field().x_plus.arg();
}

Observers observe(const FlowState& y) {
  Observers obs;
  obs.norm = norm(y.psi, y.measure);
  obs.imaginary_mass = imaginary_mass(y.psi, y.measure);
  obs.psi_peak = safe_peak(y.psi);
  obs.theta_peak = safe_peak(y.theta());

  const VelocityField x = y.components();
  const SiteRange sites = interior_sites(y.size(), y.window);
  const ComponentPair real = reality_residual(x, y.measure);
  obs.max_reality_residual = std::max(max_over(real.plus, sites), max_over(real.minus, sites));

  if (y.mode() == FlowMode::flat_polar) {
    obs.max_aux_residual = max_over(aux_residual(x, 1.0), sites);
  } else if (const auto ratio = constant_ratio(y.metric, kRatioTolerance, y.window)) {
    obs.max_aux_residual = max_over(aux_residual(x, *ratio), sites);
  } else {
    obs.max_aux_residual = kNaN;
  }
  return obs;
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(samples.size());
  for (const auto& smp : samples) t.push_back(smp.s);
  return t;
}

FlowState rk4_step(const FlowState& y, double ds) {
  if (!(ds > 0.0)) throw PreconditionError("rk4_step: ds must be positive");
  const Rates k1 = rates(y);
  const Rates k2 = rates(advance(y, k1, 0.5 * ds));
  const Rates k3 = rates(advance(y, k2, 0.5 * ds));
  const Rates k4 = rates(advance(y, k3, ds));

  FlowState out = y;
  const double w = ds / 6.0;
  if (out.mode() == FlowMode::flat_polar) {
    std::get<PolarVelocity>(out.velocity).theta +=
        w * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta);
  } else {
    auto& x = std::get<VelocityField>(out.velocity);
    x.x_plus += w * (k1.x_plus + 2.0 * k2.x_plus + 2.0 * k3.x_plus + k4.x_plus);
    x.x_minus += w * (k1.x_minus + 2.0 * k2.x_minus + 2.0 * k3.x_minus + k4.x_minus);
  }
  out.psi += w * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);
  out.s = y.s + ds;
  check_divergence(out, y.s);
  return out;
}

FlowState euler_step(const FlowState& y, double ds) {
  if (!(ds > 0.0)) throw PreconditionError("euler_step: ds must be positive");
  FlowState out = advance(y, rates(y), ds);
  out.s = y.s + ds;
  check_divergence(out, y.s);
  return out;
}

void evolve_into(Trajectory& out, const FlowState& state0, double ds, long n_steps,
                 long record_every) {
  integrate_into(out, state0, ds, n_steps, record_every, &rk4_step);
}

Trajectory evolve(const FlowState& state0, double ds, long n_steps, long record_every) {
  Trajectory out;
  evolve_into(out, state0, ds, n_steps, record_every);
  return out;
}

Trajectory euler_oracle(const FlowState& state0, double ds, long n_steps, long record_every) {
  Trajectory out;
  integrate_into(out, state0, ds, n_steps, record_every, &euler_step);
  return out;
}

}  // namespace latgeo
