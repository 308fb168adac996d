#include "latgeo/velocity.hpp"

#include <cmath>
#include <stdexcept>

namespace latgeo {

namespace {

constexpr Complex kI{0.0, 1.0};

double require_constant_ratio(const EdgeMetric& g, Window window, const char* where) {
  const auto ratio = constant_ratio(g, kRatioTolerance, window);
  if (!ratio) {
    throw PreconditionError(std::string(where) +
                            ": metric is not divergence-compatible (ratio derivative not constant)");
  }
  return *ratio;
}

// Shared body of both velocity equations once κ and ρ± are fixed.
ComponentPair rhs_from(const VelocityField& x, const ComplexFunction& kappa,
                       const RealFunction& rho_plus, const RealFunction& rho_minus) {
  const ComplexFunction& xp = x.x_plus;
  const ComplexFunction& xm = x.x_minus;
  const ComplexFunction rp = rho_plus.cast<Complex>();
  const ComplexFunction rm = rho_minus.cast<Complex>();

  ComponentPair out;
  out.plus = finite_diff(kappa, Dir::plus) * xp + (1.0 - rp) * xp * xp -
             rp * finite_diff(xp, Dir::plus) * xp - finite_diff(xp, Dir::minus) * xm;
  out.minus = finite_diff(kappa, Dir::minus) * xm + (1.0 - rm) * xm * xm -
              rm * finite_diff(xm, Dir::minus) * xm - finite_diff(xm, Dir::plus) * xp;
  return out;
}

}  // namespace

PolarVelocity::PolarVelocity(double r_, RealFunction theta_) : r(r_), theta(std::move(theta_)) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("PolarVelocity: r must be finite and non-negative");
  }
  if (!theta.allFinite()) throw std::invalid_argument("PolarVelocity: non-finite theta");
}

double ComponentPair::max_abs() const {
  double m = 0.0;
  if (plus.size() > 0) m = std::max(m, plus.abs().maxCoeff());
  if (minus.size() > 0) m = std::max(m, minus.abs().maxCoeff());
  return m;
}

VelocityField polar_to_field(const PolarVelocity& p) {
  const ComplexFunction phase = (kI * p.theta.cast<Complex>()).exp();
  ComplexFunction plus = p.r * phase;
  ComplexFunction minus = -p.r * shift(phase.conjugate(), Dir::minus);
  return {std::move(plus), std::move(minus)};
}

VelocityField real_completion(const ComplexFunction& x_plus, const Measure& mu) {
  require_same_size(x_plus.size(), mu.size(), "real_completion");
  const ComplexFunction m = mu.values().cast<Complex>();
  ComplexFunction minus = -shift(m * x_plus.conjugate(), Dir::minus) / m;
  return {x_plus, std::move(minus)};
}

ComplexFunction kappa_flat(const VelocityField& x, double rho) {
  if (!(rho > 0.0)) throw PreconditionError("kappa_flat: ratio must be positive");
  return 0.5 * ((x.x_plus - shift(x.x_plus, Dir::minus) / rho) +
                (x.x_minus - rho * shift(x.x_minus, Dir::plus)));
}

ComplexFunction kappa_flat(const VelocityField& x, const EdgeMetric& g, Window window) {
  require_same_size(x.size(), g.size(), "kappa_flat");
  return kappa_flat(x, require_constant_ratio(g, window, "kappa_flat"));
}

ComplexFunction divergence_int(const VelocityField& x, const Measure& mu) {
  require_same_size(x.size(), mu.size(), "divergence_int");
  const ComplexFunction m = mu.values().cast<Complex>();
  return -(finite_diff(m * x.x_plus, Dir::minus) + finite_diff(m * x.x_minus, Dir::plus)) / m;
}

ComplexFunction kappa_general(const VelocityField& x, const Measure& mu) {
  return 0.5 * divergence_int(x, mu);
}

RealFunction kappa_polar(const PolarVelocity& p) {
  return -p.r * finite_diff(p.theta.cos(), Dir::minus);
}

ComponentPair reality_residual(const VelocityField& x, const Measure& mu) {
  require_same_size(x.size(), mu.size(), "reality_residual");
  const ComplexFunction m = mu.values().cast<Complex>();
  return {x.x_plus.conjugate() + shift(m * x.x_minus, Dir::plus) / m,
          x.x_minus.conjugate() + shift(m * x.x_plus, Dir::minus) / m};
}

ComponentPair velocity_rhs_flat(const VelocityField& x, double rho) {
  const Eigen::Index n = x.size();
  return rhs_from(x, kappa_flat(x, rho), RealFunction::Constant(n, rho),
                  RealFunction::Constant(n, 1.0 / rho));
}

ComponentPair velocity_rhs_flat(const VelocityField& x, const EdgeMetric& g, Window window) {
  require_same_size(x.size(), g.size(), "velocity_rhs_flat");
  return velocity_rhs_flat(x, require_constant_ratio(g, window, "velocity_rhs_flat"));
}

ComponentPair velocity_rhs_generic(const VelocityField& x, const EdgeMetric& g,
                                   const Measure& mu) {
  require_same_size(x.size(), g.size(), "velocity_rhs_generic");
  const RatioDerivative r = rho(g);
  return rhs_from(x, kappa_general(x, mu), r.plus, r.minus);
}

ComponentPair velocity_rhs(const VelocityField& x, const EdgeMetric& g, MetricMode mode,
                           Window window) {
  if (mode == MetricMode::flat) return velocity_rhs_flat(x, g, window);
  return velocity_rhs_generic(x, g, Measure::from_metric(g));
}

ComplexFunction aux_residual(const VelocityField& x, double rho) {
  const ComplexFunction y = x.x_plus * shift(x.x_minus, Dir::plus);
  if (rho == 1.0) return laplacian(y);
  const ComplexFunction lhs = finite_diff(y, Dir::minus) + rho * finite_diff(y, Dir::plus);
  const ComplexFunction l_plus =
      shift(x.x_plus, Dir::plus) - shift(x.x_plus, Dir::minus) / (rho * rho);
  return lhs - (1.0 - rho) * l_plus * x.x_plus;
}

ComplexFunction aux_residual(const VelocityField& x, const EdgeMetric& g, Window window) {
  require_same_size(x.size(), g.size(), "aux_residual");
  return aux_residual(x, require_constant_ratio(g, window, "aux_residual"));
}

ComplexFunction implicit_condition_residual(const VelocityField& x, double rho) {
  const double rho2 = rho * rho;
  auto apply_l = [rho2](const ComplexFunction& f) -> ComplexFunction {
    return shift(f, Dir::plus) - shift(f, Dir::minus) / rho2;
  };
  const ComplexFunction lhs = apply_l(x.x_plus) * x.x_plus;
  const ComplexFunction rhs = rho2 * shift(apply_l(x.x_minus) * x.x_minus, Dir::plus);
  return lhs - rhs;
}

RealFunction theta_rhs(const PolarVelocity& p) {
  const RealFunction s = p.theta.sin();
  return p.r * (shift(s, Dir::minus) - shift(s, Dir::plus));
}

}  // namespace latgeo
