#pragma once

// Geodesic velocity fields on the lattice line: divergence and κ, the velocity
// equations for flat (constant ρ) and generic metrics, reality with respect to
// a measure, the improved auxiliary equation and the polar parametrization
// X⁺ = r e^{iθ}, X⁻ = -R₋(r e^{-iθ}) of its flat solutions.

#include "latgeo/lattice.hpp"

namespace latgeo {

/// Constant amplitude r >= 0 and a real phase field θ (radians).
struct PolarVelocity {
  double r = 0.0;
  RealFunction theta;

  PolarVelocity() = default;
  PolarVelocity(double r, RealFunction theta);

  Eigen::Index size() const { return theta.size(); }
};

/// Component pair (plus, minus); used for residuals and time derivatives.
struct ComponentPair {
  ComplexFunction plus;
  ComplexFunction minus;

  double max_abs() const;
};

enum class MetricMode { flat, generic };

/// Relative tolerance used to decide that ρ is constant.
inline constexpr double kRatioTolerance = 1e-12;

VelocityField polar_to_field(const PolarVelocity& p);

/// Completes X⁺ to a field real with respect to ∫ = Σ μ:
/// X⁻ = -R₋(μ conj(X⁺)) / μ. For constant μ and X⁺ = r e^{iθ} this is the
/// polar field.
VelocityField real_completion(const ComplexFunction& x_plus, const Measure& mu);

/// κ = ½((1 - R₋/ρ) X⁺ + (1 - ρR₊) X⁻) for a constant ratio ρ.
ComplexFunction kappa_flat(const VelocityField& x, double rho);
/// Same, with ρ read from the metric. Throws PreconditionError unless ρ is
/// constant over the trusted sites of `window`.
ComplexFunction kappa_flat(const VelocityField& x, const EdgeMetric& g,
                           Window window = Window::periodic);

/// div_∫ X = -(1/μ)(∂₋(μX⁺) + ∂₊(μX⁻)), the unique function with
/// ∫ a div_∫X + ∫ X(da) = 0 for all a.
ComplexFunction divergence_int(const VelocityField& x, const Measure& mu);
ComplexFunction kappa_general(const VelocityField& x, const Measure& mu);

/// κ of a polar field: -r ∂₋ cos θ. Real.
RealFunction kappa_polar(const PolarVelocity& p);

/// res± = conj(X±) + R±(μ X∓)/μ; both vanish iff X is real w.r.t. ∫.
ComponentPair reality_residual(const VelocityField& x, const Measure& mu);

/// Right-hand side of the velocity equations for a constant ratio ρ
/// (ρ₊ = ρ, ρ₋ = 1/ρ):
///   Ẋ⁺ = (∂₊κ)X⁺ + (1-ρ)X⁺X⁺ - ρ(∂₊X⁺)X⁺ - (∂₋X⁺)X⁻
///   Ẋ⁻ = (∂₋κ)X⁻ + (1-ρ⁻¹)X⁻X⁻ - ρ⁻¹(∂₋X⁻)X⁻ - (∂₊X⁻)X⁺
ComponentPair velocity_rhs_flat(const VelocityField& x, double rho);
ComponentPair velocity_rhs_flat(const VelocityField& x, const EdgeMetric& g,
                                Window window = Window::periodic);

/// Generic metric: pointwise ρ₊ and ρ₋ from g, κ = ½ div_∫ X for μ.
ComponentPair velocity_rhs_generic(const VelocityField& x, const EdgeMetric& g,
                                   const Measure& mu);

/// Dispatch on mode; generic mode uses μ = g.
ComponentPair velocity_rhs(const VelocityField& x, const EdgeMetric& g, MetricMode mode,
                           Window window = Window::periodic);

/// Improved auxiliary equation for constant ρ:
///   (∂₋ + ρ∂₊)(X⁺ R₊X⁻) - (1-ρ)((R₊ - R₋/ρ²)X⁺)X⁺,
/// which for ρ = 1 is Δ(X⁺ R₊X⁻).
ComplexFunction aux_residual(const VelocityField& x, double rho);
ComplexFunction aux_residual(const VelocityField& x, const EdgeMetric& g,
                             Window window = Window::periodic);

/// (L X⁺)X⁺ - ρ² R₊((L X⁻)X⁻) with L = R₊ - ρ⁻² R₋. Diagnostic only.
ComplexFunction implicit_condition_residual(const VelocityField& x, double rho);

/// θ̇ = r (R₋ - R₊) sin θ. r itself is a constant of motion.
RealFunction theta_rhs(const PolarVelocity& p);

}  // namespace latgeo
