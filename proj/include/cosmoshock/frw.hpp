#pragma once

#include <cmath>
#include <stdexcept>

#include "cosmoshock/constants.hpp"

namespace cosmoshock {

/// Closed-form k=0 FRW background for the barotropic equation of state
/// p = sigma*rho, normalized so that R(t0) = 1 at present time t0.
struct FRWBackground {
  double sigma = 0.0;  // p/rho, dimensionless
  double h0 = 0.0;     // Hubble constant at t0, 1/time
  double t0 = 0.0;     // age of the universe, time
  double rho0 = 0.0;   // density at t0, 1/length^2
};

/// FRW fluid/metric state at one cosmological time.
struct FRWState {
  double t = 0.0;
  double R = 0.0;    // scale factor, R(t0) = 1
  double H = 0.0;    // Hubble parameter
  double rho = 0.0;  // density
  double p = 0.0;    // pressure, p = sigma*rho
};

/// Builds the background from (sigma, H0): t0 = 2/(3(1+sigma)H0) and
/// rho0 = 4/(3 kappa (1+sigma)^2 t0^2), so that H0^2 = (kappa/3) rho0.
inline FRWBackground background_from_h0(double sigma, double h0) {
  if (!(sigma >= 0.0 && sigma <= 1.0))
    throw std::invalid_argument("background_from_h0: sigma must lie in [0, 1]");
  if (!(h0 > 0.0)) throw std::invalid_argument("background_from_h0: H0 must be positive");
  FRWBackground bg;
  bg.sigma = sigma;
  bg.h0 = h0;
  bg.t0 = 2.0 / (3.0 * (1.0 + sigma) * h0);
  bg.rho0 = 4.0 / (3.0 * kappa * (1.0 + sigma) * (1.0 + sigma) * bg.t0 * bg.t0);
  return bg;
}

/// rho = 4/(3 kappa (1+sigma)^2 t^2), R = (t/t0)^{2/(3(1+sigma))}, H = H0 t0/t.
inline FRWState state_at(const FRWBackground& bg, double t) {
  if (!(t > 0.0)) throw std::domain_error("state_at: t must be positive (t = 0 is the Big Bang)");
  FRWState st;
  st.t = t;
  st.R = std::pow(t / bg.t0, 2.0 / (3.0 * (1.0 + bg.sigma)));
  st.H = bg.h0 * bg.t0 / t;
  st.rho = 4.0 / (3.0 * kappa * (1.0 + bg.sigma) * (1.0 + bg.sigma) * t * t);
  st.p = bg.sigma * st.rho;
  return st;
}

/// Total mass inside areal radius rbar: M = (kappa/6) rho rbar^3, so that
/// 2M/rbar = (H rbar)^2.
inline double mass_inside(const FRWState& st, double rbar) {
  if (!(rbar >= 0.0)) throw std::invalid_argument("mass_inside: rbar must be nonnegative");
  return kappa / 6.0 * st.rho * rbar * rbar * rbar;
}

/// Exponent q in M ~ t^q inside a comoving ball: q = -2 sigma/(1+sigma).
/// Negative iff sigma > 0 (the mass decreases in time).
inline double mass_decay_exponent(double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0))
    throw std::invalid_argument("mass_decay_exponent: sigma must lie in [0, 1]");
  return -2.0 * sigma / (1.0 + sigma);
}

/// Infinite-redshift coordinate r_inf = 2/((1+3 sigma) H0): the FRW position
/// at the Big Bang of the furthest objects observable at the origin by t0.
inline double infinite_redshift_radius(const FRWBackground& bg) {
  return 2.0 / ((1.0 + 3.0 * bg.sigma) * bg.h0);
}

/// Metric coefficient of the FRW metric in standard Schwarzschild form,
/// A = 1 - (H rbar)^2.  A vanishes exactly at one Hubble length.
inline double frw_schwarzschild_A(const FRWState& st, double rbar) {
  const double hr = st.H * rbar;
  return 1.0 - hr * hr;
}

/// Characteristic speed drbar/dt = (-1 + H^2 rbar^2)/(H rbar) of the
/// integrating-factor equation; vanishes at the Hubble length.
inline double characteristic_speed(const FRWState& st, double rbar) {
  if (rbar == 0.0) throw std::domain_error("characteristic_speed: rbar must be nonzero");
  if (st.H == 0.0) throw std::domain_error("characteristic_speed: H must be nonzero");
  const double hr = st.H * rbar;
  return (-1.0 + hr * hr) / hr;
}

/// drbar/dt = H rbar - 1 for a radially infalling light ray (c = 1):
/// the arclength distance to the ray grows while it is beyond 1/H.
inline double light_ray_drift(const FRWState& st, double rbar) {
  return st.H * rbar - 1.0;
}

}  // namespace cosmoshock
