#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "cosmoshock/constants.hpp"

namespace cosmoshock {

/// Time orientation of the matched solution.  The expanding branch
/// (Rdot > 0, White Hole) is the cosmological one; collapsing is its
/// time reversal.
enum class TimeOrientation { expanding, collapsing };

/// Zero-pressure Oppenheimer-Snyder interface inside the black hole:
/// a k=0 FRW metric matched to a Schwarzschild exterior of mass M across
/// a comoving contact discontinuity.
struct OSConfig {
  double M = 0.0;     // Schwarzschild mass, length
  double rho0 = 0.0;  // FRW density at t0, 1/length^2
  TimeOrientation orientation = TimeOrientation::expanding;
};

/// Comoving interface coordinate r0 = (6M/(kappa rho0))^{1/3}; the
/// interface is rbar(t) = R(t) r0.
inline double interface_r0(double M, double rho0) {
  if (!(M > 0.0)) throw std::invalid_argument("interface_r0: M must be positive");
  if (!(rho0 > 0.0)) throw std::invalid_argument("interface_r0: rho0 must be positive");
  return std::cbrt(6.0 * M / (kappa * rho0));
}

/// Shock-surface radius rbar = (6M/(kappa rho(t)))^{1/3} at density rho(t).
inline double shock_surface_rbar(double M, double rho_t) {
  if (!(M > 0.0)) throw std::invalid_argument("shock_surface_rbar: M must be positive");
  if (!(rho_t > 0.0)) throw std::invalid_argument("shock_surface_rbar: rho must be positive");
  return std::cbrt(6.0 * M / (kappa * rho_t));
}

/// FRW time at which the interface crosses the event horizon rbar = 2M
/// of the exterior metric, on the sigma=0 background rho = 4/(3 kappa t^2).
inline double horizon_crossing_time(double M) {
  if (!(M > 0.0)) throw std::invalid_argument("horizon_crossing_time: M must be positive");
  return 4.0 * M / 3.0;
}

/// Transformation function b of the FRW -> Eddington-Finkelstein time map:
/// b = -1/(H rbar + 1) on the expanding branch, -1/(H rbar - 1) when
/// collapsing; nonsingular and single-signed within each orientation.
inline double transform_b(double H, double rbar, TimeOrientation orientation) {
  const double denom =
      H * rbar + (orientation == TimeOrientation::expanding ? 1.0 : -1.0);
  if (denom == 0.0) throw std::domain_error("transform_b: singular denominator H*rbar -+ 1");
  return -1.0 / denom;
}

/// Characteristic speed -1/b and interface speed Rdot*r0 of the EF time
/// map along the OS interface; their gap is exactly +-1, so the interface
/// is never characteristic.
inline std::pair<double, double> characteristic_vs_interface(double H, double rbar,
                                                             TimeOrientation orientation,
                                                             double r0, double Rdot) {
  const double b = transform_b(H, rbar, orientation);
  return {-1.0 / b, Rdot * r0};
}

}  // namespace cosmoshock
