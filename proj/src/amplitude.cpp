#include "latgeo/amplitude.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace latgeo {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Amplitude amplitude_rhs(const Amplitude& psi, const VelocityField& x,
                        const ComplexFunction& kappa) {
  require_same_size(psi.size(), x.size(), "amplitude_rhs");
  require_same_size(psi.size(), kappa.size(), "amplitude_rhs");
  return -finite_diff(psi, Dir::plus) * x.x_plus - finite_diff(psi, Dir::minus) * x.x_minus -
         psi * kappa;
}

Amplitude amplitude_rhs_polar(const Amplitude& psi, const PolarVelocity& p,
                              const RealFunction& kappa) {
  require_same_size(psi.size(), p.size(), "amplitude_rhs_polar");
  require_same_size(psi.size(), kappa.size(), "amplitude_rhs_polar");
  const ComplexFunction phase = (kI * p.theta.cast<Complex>()).exp();
  return -p.r * finite_diff(psi, Dir::plus) * phase +
         p.r * finite_diff(psi, Dir::minus) * shift(phase.conjugate(), Dir::minus) -
         psi * kappa.cast<Complex>();
}

double norm(const Amplitude& psi, const Measure& mu) {
  return integrate(psi.abs2(), mu);
}

double imaginary_mass(const Amplitude& psi, const Measure& mu) {
  return integrate(psi.imag().square(), mu);
}

double peak_position(const RealFunction& profile) {
  const Eigen::Index n = profile.size();
  if (n < kMinSites) throw PreconditionError("peak_position: too few sites");
  Eigen::Index best = 0;
  const double top = profile.maxCoeff(&best);
  if (!std::isfinite(top)) throw PreconditionError("peak_position: non-finite profile");
  if ((profile == top).count() > 1) {
    throw PreconditionError("peak_position: maximum is not attained at a unique site");
  }
  const double left = profile((best + n - 1) % n);
  const double right = profile((best + 1) % n);
  const double curvature = left - 2.0 * top + right;
  double offset = curvature != 0.0 ? 0.5 * (left - right) / curvature : 0.0;
  double pos = static_cast<double>(best) + offset;
  if (pos < 0.0) pos += static_cast<double>(n);
  if (pos >= static_cast<double>(n)) pos -= static_cast<double>(n);
  return pos;
}

double peak_position(const Amplitude& psi) { return peak_position(RealFunction(psi.abs2())); }

double peak_velocity(std::span<const double> s, std::span<const double> position,
                     Eigen::Index n_sites, double lo, double hi) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (s.size() != position.size()) throw DimensionError("peak_velocity: length mismatch");
  if (s.size() < 2) return nan;

  // Unwrap over all finite samples first so the window cut does not matter.
  const double period = static_cast<double>(n_sites);
  std::vector<double> t;
  std::vector<double> x;
  double offset = 0.0;
  double prev = nan;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!std::isfinite(position[k])) continue;
    if (std::isfinite(prev)) {
      const double jump = position[k] - prev;
      if (jump > 0.5 * period) offset -= period;
      if (jump < -0.5 * period) offset += period;
    }
    prev = position[k];
    t.push_back(s[k]);
    x.push_back(position[k] + offset);
  }

  const double s0 = s.front();
  const double s1 = s.back();
  const double a = s0 + lo * (s1 - s0);
  const double b = s0 + hi * (s1 - s0);
  double st = 0, sx = 0, stt = 0, stx = 0;
  std::size_t m = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < a || t[k] > b) continue;
    st += t[k];
    sx += x[k];
    stt += t[k] * t[k];
    stx += t[k] * x[k];
    ++m;
  }
  if (m < 2) return nan;
  const double dm = static_cast<double>(m);
  const double denom = dm * stt - st * st;
  if (denom == 0.0) return nan;
  return (dm * stx - st * sx) / denom;
}

}  // namespace latgeo
