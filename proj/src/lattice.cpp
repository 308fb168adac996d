#include "latgeo/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace latgeo {

namespace {

void require_positive(const RealFunction& v, const char* what) {
  if (v.size() < kMinSites) {
    throw std::invalid_argument(std::string(what) + ": need at least " +
                                std::to_string(kMinSites) + " sites, got " +
                                std::to_string(v.size()));
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i)) || v(i) <= 0.0) {
      throw std::invalid_argument(std::string(what) + "[" + std::to_string(i) +
                                  "] must be finite and positive");
    }
  }
}

}  // namespace

EdgeMetric::EdgeMetric(RealFunction g) : g_(std::move(g)) { require_positive(g_, "metric"); }

EdgeMetric EdgeMetric::constant(Eigen::Index n, double value) {
  return EdgeMetric(RealFunction::Constant(n, value));
}

EdgeMetric EdgeMetric::geometric(Eigen::Index n, double g0, double lambda) {
  RealFunction g(n);
  for (Eigen::Index i = 0; i < n; ++i) g(i) = g0 * std::pow(lambda, static_cast<double>(i));
  return EdgeMetric(std::move(g));
}

Measure::Measure(RealFunction mu) : mu_(std::move(mu)) { require_positive(mu_, "measure"); }

Measure Measure::uniform(Eigen::Index n, double weight) {
  return Measure(RealFunction::Constant(n, weight));
}

VelocityField::VelocityField(ComplexFunction plus, ComplexFunction minus)
    : x_plus(std::move(plus)), x_minus(std::move(minus)) {
  require_same_size(x_plus.size(), x_minus.size(), "VelocityField");
  if (!x_plus.allFinite() || !x_minus.allFinite()) {
    throw std::invalid_argument("VelocityField: non-finite component");
  }
}

RatioDerivative rho(const EdgeMetric& g) {
  const RealFunction& gp = g.values();
  const RealFunction gm = shift(gp, Dir::minus);
  return {shift(gp, Dir::plus) / gp, shift(gm, Dir::minus) / gm};
}

std::optional<double> constant_ratio(const EdgeMetric& g, double tol, Window window) {
  if (!(tol > 0.0)) throw PreconditionError("constant_ratio: tolerance must be positive");
  const SiteRange sites = interior_sites(g.size(), window);
  if (sites.count() == 0) return std::nullopt;
  const RealFunction rp = rho(g).plus.segment(sites.first, sites.count());
  const double mean = rp.mean();
  if ((rp - mean).abs().maxCoeff() <= tol * mean) return mean;
  return std::nullopt;
}

bool is_divergence_compatible(const EdgeMetric& g, double tol, Window window) {
  return constant_ratio(g, tol, window).has_value();
}

double measure_ratio_defect(const EdgeMetric& g, const Measure& mu, Window window) {
  require_same_size(g.size(), mu.size(), "measure_ratio_defect");
  const RatioDerivative r = rho(g);
  const RealFunction& m = mu.values();
  const RealFunction up = shift(m, Dir::plus) / m - r.plus;
  const RealFunction down = shift(m, Dir::minus) / m - r.minus;
  const SiteRange sites = interior_sites(g.size(), window);
  return std::max(up.segment(sites.first, sites.count()).abs().maxCoeff(),
                  down.segment(sites.first, sites.count()).abs().maxCoeff());
}

std::pair<RealFunction, RealFunction> div_basis(const EdgeMetric& g) {
  const RealFunction& gp = g.plus();
  const RealFunction gm = g.minus();
  return {1.0 - gm / gp, 1.0 - gp / gm};
}

}  // namespace latgeo
