#pragma once

// Fixed-step integration of the coupled geodesic system.
//
// flat_polar mode evolves (θ, ψ) with r held fixed; generic mode evolves
// (X⁺, X⁻, ψ) directly through the velocity equations without projecting back
// onto the reality constraint, so drift from it is observable.

#include <variant>
#include <vector>

#include "latgeo/amplitude.hpp"

namespace latgeo {

enum class FlowMode { flat_polar, generic };

/// Any component above this magnitude aborts the run.
inline constexpr double kDivergenceThreshold = 1e12;
/// Relative norm drift above this sets Trajectory::norm_drift_warning.
inline constexpr double kNormDriftWarning = 1e-6;

struct FlowState {
  double s = 0.0;
  std::variant<PolarVelocity, VelocityField> velocity;
  Amplitude psi;
  EdgeMetric metric;
  Measure measure;
  /// `open` only for constant-ratio diagnostics on geometric metrics; residual
  /// norms then skip the two sites next to each end.
  Window window = Window::periodic;

  /// Requires ρ = 1 (constant metric); the measure is the metric measure.
  static FlowState flat_polar(PolarVelocity p, Amplitude psi, EdgeMetric metric);
  static FlowState generic(VelocityField x, Amplitude psi, EdgeMetric metric, Measure measure,
                           Window window = Window::periodic);

  FlowMode mode() const {
    return std::holds_alternative<PolarVelocity>(velocity) ? FlowMode::flat_polar
                                                           : FlowMode::generic;
  }
  Eigen::Index size() const { return psi.size(); }
  const PolarVelocity& polar() const { return std::get<PolarVelocity>(velocity); }
  const VelocityField& field() const { return std::get<VelocityField>(velocity); }

  /// Velocity field in components, whatever the mode.
  VelocityField components() const;
  /// κ consistent with the mode: -r∂₋cosθ, or ½div_∫ X for the state's measure.
  ComplexFunction kappa() const;
  /// θ in flat_polar mode, arg X⁺ in generic mode.
  RealFunction theta() const;
};

struct Observers {
  double norm = 0.0;
  double imaginary_mass = 0.0;
  double psi_peak = 0.0;    ///< NaN when |ψ|² has no unique maximum.
  double theta_peak = 0.0;  ///< NaN when θ has no unique maximum.
  double max_aux_residual = 0.0;      ///< NaN when ρ is not constant.
  double max_reality_residual = 0.0;
};

Observers observe(const FlowState& state);

struct Sample {
  double s = 0.0;
  RealFunction theta;
  ComplexFunction x_plus;   ///< Empty in flat_polar mode.
  ComplexFunction x_minus;  ///< Empty in flat_polar mode.
  ComplexFunction kappa;
  Amplitude psi;
  Observers obs;
};

struct Trajectory {
  std::vector<Sample> samples;
  double max_norm_drift = 0.0;  ///< max |norm(s) - norm(0)| / norm(0) over samples.
  bool norm_drift_warning = false;

  std::vector<double> times() const;
};

/// One classical RK4 step of all evolving components; κ is recomputed from
/// the stage velocity at every stage. Throws DivergenceError (carrying the
/// incoming s) if the result is non-finite or exceeds kDivergenceThreshold.
FlowState rk4_step(const FlowState& state, double ds);

/// One forward-Euler step: state + ds * RHS.
FlowState euler_step(const FlowState& state, double ds);

/// Appends samples to `out` as it goes, so a DivergenceError leaves the
/// samples recorded before the failure in place.
void evolve_into(Trajectory& out, const FlowState& state0, double ds, long n_steps,
                 long record_every);

/// Integrates n_steps RK4 steps, sampling at step 0, every record_every steps
/// and at the final step.
Trajectory evolve(const FlowState& state0, double ds, long n_steps, long record_every = 1);

/// Forward-Euler counterpart of evolve; a test oracle for the RK4 path.
Trajectory euler_oracle(const FlowState& state0, double ds, long n_steps, long record_every = 1);

}  // namespace latgeo
