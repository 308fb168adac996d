#pragma once

// Discrete calculus on a finite periodic window of the integer line.
//
// A function on the window is a dense Eigen array of length N indexed
// i = 0..N-1 with index arithmetic mod N. Shifts R± and differences ∂± = R± - 1
// are exact on the cycle, so sums telescope and integration by parts holds
// without boundary terms.

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>

#include "latgeo/errors.hpp"

namespace latgeo {

using Complex = std::complex<double>;

template <typename Scalar>
using LatticeFunction = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using RealFunction = LatticeFunction<double>;
using ComplexFunction = LatticeFunction<Complex>;

enum class Dir { plus, minus };

/// How the window edges are read. `open` treats the window as a piece of the
/// infinite line: values that would need a wrap-around are not trusted and
/// diagnostics skip them.
enum class Window { periodic, open };

inline constexpr Eigen::Index kMinSites = 3;

/// Inclusive range of sites on which ratio data is defined.
struct SiteRange {
  Eigen::Index first = 0;
  Eigen::Index last = -1;

  Eigen::Index count() const { return last >= first ? last - first + 1 : 0; }
};

/// Sites where both ρ₊ (needs i+1) and ρ₋ (needs i-1, i-2) are available
/// without wrapping. Periodic windows use every site.
inline SiteRange interior_sites(Eigen::Index n, Window window) {
  if (window == Window::periodic) return {0, n - 1};
  return {2, n - 2};
}

inline void require_same_size(Eigen::Index a, Eigen::Index b, const char* where) {
  if (a != b) {
    throw DimensionError(std::string(where) + ": length mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

/// R±: result(i) = f(i ± 1 mod N).
template <typename Derived>
LatticeFunction<typename Derived::Scalar> shift(const Eigen::ArrayBase<Derived>& f, Dir dir) {
  const LatticeFunction<typename Derived::Scalar> v = f;
  const Eigen::Index n = v.size();
  LatticeFunction<typename Derived::Scalar> out(n);
  if (n == 0) return out;
  if (dir == Dir::plus) {
    out.head(n - 1) = v.tail(n - 1);
    out(n - 1) = v(0);
  } else {
    out.tail(n - 1) = v.head(n - 1);
    out(0) = v(n - 1);
  }
  return out;
}

/// ∂± f = R±f - f.
template <typename Derived>
LatticeFunction<typename Derived::Scalar> finite_diff(const Eigen::ArrayBase<Derived>& f,
                                                      Dir dir) {
  const LatticeFunction<typename Derived::Scalar> v = f;
  return shift(v, dir) - v;
}

/// Δ f = f(i+1) + f(i-1) - 2 f(i).
template <typename Derived>
LatticeFunction<typename Derived::Scalar> laplacian(const Eigen::ArrayBase<Derived>& f) {
  const LatticeFunction<typename Derived::Scalar> v = f;
  return shift(v, Dir::plus) + shift(v, Dir::minus) - 2.0 * v;
}

/// Square lengths g(i) > 0 of the edges i--(i+1). Edge symmetric: the same
/// value is read for both arrow directions, so g₊ = g and g₋ = R₋(g).
class EdgeMetric {
 public:
  explicit EdgeMetric(RealFunction g);

  static EdgeMetric constant(Eigen::Index n, double value = 1.0);
  /// g(i) = g0 * lambda^i. Only geometric on an open window; the seam breaks it.
  static EdgeMetric geometric(Eigen::Index n, double g0, double lambda);

  const RealFunction& values() const { return g_; }
  Eigen::Index size() const { return g_.size(); }
  double operator()(Eigen::Index i) const { return g_(i); }

  const RealFunction& plus() const { return g_; }
  RealFunction minus() const { return shift(g_, Dir::minus); }

 private:
  RealFunction g_;
};

/// Positive weights defining ∫ f = Σ f(i) μ(i).
class Measure {
 public:
  explicit Measure(RealFunction mu);

  static Measure uniform(Eigen::Index n, double weight = 1.0);
  static Measure from_metric(const EdgeMetric& g) { return Measure(g.values()); }

  const RealFunction& values() const { return mu_; }
  Eigen::Index size() const { return mu_.size(); }
  double operator()(Eigen::Index i) const { return mu_(i); }

 private:
  RealFunction mu_;
};

template <typename Derived>
typename Derived::Scalar integrate(const Eigen::ArrayBase<Derived>& f, const Measure& mu) {
  require_same_size(f.size(), mu.size(), "integrate");
  return (f * mu.values().template cast<typename Derived::Scalar>()).sum();
}

/// ω = ω₊ e⁺ + ω₋ e⁻.
template <typename Scalar>
struct OneForm {
  LatticeFunction<Scalar> plus;
  LatticeFunction<Scalar> minus;
};

/// d f = (∂₊f) e⁺ + (∂₋f) e⁻.
template <typename Derived>
OneForm<typename Derived::Scalar> exterior_d(const Eigen::ArrayBase<Derived>& f) {
  return {finite_diff(f, Dir::plus), finite_diff(f, Dir::minus)};
}

/// X = f₊ X⁺ + f₋ X⁻ written in the basis dual to e±.
struct VelocityField {
  ComplexFunction x_plus;
  ComplexFunction x_minus;

  VelocityField() = default;
  VelocityField(ComplexFunction plus, ComplexFunction minus);

  Eigen::Index size() const { return x_plus.size(); }
};

/// X(ω) = ω₊ X⁺ + ω₋ X⁻.
template <typename Scalar>
ComplexFunction eval_field(const OneForm<Scalar>& omega, const VelocityField& x) {
  require_same_size(omega.plus.size(), x.size(), "eval_field");
  require_same_size(omega.minus.size(), x.size(), "eval_field");
  return omega.plus.template cast<Complex>() * x.x_plus +
         omega.minus.template cast<Complex>() * x.x_minus;
}

/// Ratio derivative ρ± = R±(g±/g∓): ρ₊(i) = g(i+1)/g(i), ρ₋(i) = g(i-2)/g(i-1).
struct RatioDerivative {
  RealFunction plus;
  RealFunction minus;
};

RatioDerivative rho(const EdgeMetric& g);

/// Mean of ρ₊ over the trusted sites if it is constant to relative `tol`.
/// A periodic window only closes up for ρ = 1.
std::optional<double> constant_ratio(const EdgeMetric& g, double tol,
                                     Window window = Window::periodic);

bool is_divergence_compatible(const EdgeMetric& g, double tol, Window window = Window::periodic);

/// max over interior sites of |R₊μ/μ - ρ₊| and |R₋μ/μ - ρ₋|. Zero when μ is a
/// divergence-compatible measure for g.
double measure_ratio_defect(const EdgeMetric& g, const Measure& mu,
                            Window window = Window::periodic);

/// (div f₊, div f₋) = (1 - g₋/g₊, 1 - g₊/g₋).
std::pair<RealFunction, RealFunction> div_basis(const EdgeMetric& g);

}  // namespace latgeo
