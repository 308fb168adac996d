#pragma once

#include <span>

#include "latgeo/velocity.hpp"

namespace latgeo {

/// Wave function ψ on the window; |ψ|² is the density.
using Amplitude = ComplexFunction;

/// ψ̇ = -(∂₊ψ)X⁺ - (∂₋ψ)X⁻ - ψκ.
Amplitude amplitude_rhs(const Amplitude& psi, const VelocityField& x, const ComplexFunction& kappa);

/// Polar form: ψ̇ = -r(∂₊ψ)e^{iθ} + r(∂₋ψ)R₋(e^{-iθ}) - ψκ, with κ = kappa_polar(p).
Amplitude amplitude_rhs_polar(const Amplitude& psi, const PolarVelocity& p,
                              const RealFunction& kappa);

/// ∫ |ψ|².
double norm(const Amplitude& psi, const Measure& mu);

/// Σ μ (Im ψ)².
double imaginary_mass(const Amplitude& psi, const Measure& mu);

/// Sub-site location of the unique maximum of `profile`, refined by a parabola
/// through the maximum and its two periodic neighbours. Result in [0, N).
/// Throws PreconditionError when the maximum is attained at more than one site.
double peak_position(const RealFunction& profile);

/// Peak of the density |ψ|².
double peak_position(const Amplitude& psi);

/// Least-squares slope of peak position against s over samples with
/// s in [s0 + lo (s1 - s0), s0 + hi (s1 - s0)], after unwrapping jumps across
/// the periodic seam (a jump larger than N/2 is taken as a wrap). NaN entries
/// are skipped; NaN is returned when fewer than two samples remain.
double peak_velocity(std::span<const double> s, std::span<const double> position,
                     Eigen::Index n_sites, double lo = 0.2, double hi = 0.8);

}  // namespace latgeo
