#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cosmoshock/stiff_ode.hpp"

namespace cosmoshock {

/// One point of the shock orbit in the (S, u) phase plane:
/// S = 1/N is the inverse squared Hubble count, u = pbar/rho.
struct PhasePoint {
  double S = 0.0;
  double u = 0.0;
};

/// Scalar shock ODE du/dS, grouped exactly as written:
///   {(1+u)/(2(1+3u)S)} {((3u-1)(sigma-u) + 6u(1+u)S) / ((sigma-u) + (1+u)S)}.
inline double du_dS(double S, double u, double sigma) {
  if (!(S > 0.0)) throw std::domain_error("du_dS: S must be positive");
  const double den = (sigma - u) + (1.0 + u) * S;
  if (den == 0.0) throw std::domain_error("du_dS: vanishing denominator (sigma-u)+(1+u)S");
  const double num = (3.0 * u - 1.0) * (sigma - u) + 6.0 * u * (1.0 + u) * S;
  return (1.0 + u) / (2.0 * (1.0 + 3.0 * u) * S) * (num / den);
}

/// Autonomous form: S' = F, u' = G, with du/dS = G/F wherever F != 0.
///   F = 2S(1+3u)((sigma-u)+(1+u)S)
///   G = (1+u)(-(1-3u)(sigma-u)+6u(1+u)S)
inline std::pair<double, double> autonomous_field(double S, double u, double sigma) {
  const double F = 2.0 * S * (1.0 + 3.0 * u) * ((sigma - u) + (1.0 + u) * S);
  const double G = (1.0 + u) * (-(1.0 - 3.0 * u) * (sigma - u) + 6.0 * u * (1.0 + u) * S);
  return {F, G};
}

/// G-isocline S = h(u) = (sigma-u)(1/3-u)/(2u(1+u)), strictly decreasing on
/// 0 < u < min(sigma, 1/3); diverges at u = 0.
inline double isocline_h(double u, double sigma) {
  if (!(u > 0.0)) throw std::domain_error("isocline_h: h diverges at u = 0");
  return (sigma - u) * (1.0 / 3.0 - u) / (2.0 * u * (1.0 + u));
}

/// Entropy-region boundary E(u) = ((1-u)/(1+u)) ((sigma-u)/(sigma+u)):
/// S < E(u) is equivalent to the compressive entropy conditions plus the
/// physical bound pbar < rhobar.
inline double entropy_boundary_E(double u, double sigma) {
  if (u == -sigma) throw std::domain_error("entropy_boundary_E: u = -sigma");
  return (1.0 - u) / (1.0 + u) * ((sigma - u) / (sigma + u));
}

/// Lower invariant-region boundary Q_a(u) = a^2 (sigma-u)^2/(1+u)^2;
/// S >= Q_a is negatively invariant for a^2 <= 1/(3 sigma).
inline double invariant_Q(double u, double sigma, double a) {
  const double q = a * (sigma - u) / (1.0 + u);
  return q * q;
}

namespace detail {

// du/dtau and its u-derivative, tau = ln S.  Written for the Newton
// iteration of the stiff stepper; the transverse relaxation rate grows
// like (1-3 sigma)/S toward the rest point, which is what makes the
// system stiff for sigma < 1/3.
inline double du_dtau(double tau, double u, double sigma) {
  const double S = std::exp(tau);
  const double num = (3.0 * u - 1.0) * (sigma - u) + 6.0 * u * (1.0 + u) * S;
  const double den = (sigma - u) + (1.0 + u) * S;
  return (1.0 + u) / (2.0 * (1.0 + 3.0 * u)) * (num / den);
}

inline double du_dtau_jac(double tau, double u, double sigma) {
  const double S = std::exp(tau);
  const double P = 1.0 + u;
  const double T = 1.0 + 3.0 * u;
  const double num = (3.0 * u - 1.0) * (sigma - u) + 6.0 * u * P * S;
  const double den = (sigma - u) + P * S;
  const double dnum = 3.0 * (sigma - u) - (3.0 * u - 1.0) + 6.0 * (1.0 + 2.0 * u) * S;
  const double dden = -1.0 + S;
  const double pref = P / (2.0 * T);
  const double dpref = 1.0 / (2.0 * T) - 3.0 * P / (2.0 * T * T);
  return dpref * (num / den) + pref * (dnum * den - num * dden) / (den * den);
}

}  // namespace detail

struct OrbitConfig {
  double s_min = 1e-9;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int points_per_decade = 20;
};

/// The integrated trajectory u_sigma(S) from (S, u) = (1, 0) down to s_min.
/// Samples are ordered by decreasing S.  `defects` lists any sample that
/// violates monotonicity, the entropy region, or the invariant-region
/// sandwich beyond tolerance (which signals integrator failure, never a
/// property of the true orbit).  For sigma > 1/3 the certifications are
/// disabled and `exploratory` is set.
struct Orbit {
  double sigma = 0.0;
  std::vector<PhasePoint> samples;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  bool exploratory = false;
  // S below which integration was halted at the near-cancellation floor
  // and the sqrt(S) asymptotic continuation applies (sigma = 1/3 only);
  // 0 when the full range was integrated.
  double asymptotic_below_S = 0.0;
  std::vector<std::string> defects;
};

inline constexpr double sigma_phase_plane_min = 1e-4;

inline Orbit integrate_orbit(double sigma, const OrbitConfig& cfg = {}) {
  if (!(sigma >= sigma_phase_plane_min))
    throw std::invalid_argument(
        "integrate_orbit: sigma below the phase-plane guard 1e-4 (the sigma -> 0 limit is "
        "served analytically by the OS solution)");
  if (!(sigma < 1.0)) throw std::invalid_argument("integrate_orbit: sigma must be below 1");
  if (!(cfg.s_min > 0.0 && cfg.s_min < 1.0))
    throw std::invalid_argument("integrate_orbit: s_min must lie in (0, 1)");

  Orbit orbit;
  orbit.sigma = sigma;
  orbit.rel_tol = cfg.rel_tol;
  orbit.abs_tol = cfg.abs_tol;
  orbit.exploratory = sigma > 1.0 / 3.0;

  const double tau_min = std::log(cfg.s_min);
  const double dtau = std::log(10.0) / cfg.points_per_decade;
  std::vector<double> checkpoints;
  for (double tau = -dtau; tau > tau_min + 0.5 * dtau; tau -= dtau) checkpoints.push_back(tau);
  checkpoints.push_back(tau_min);

  orbit.samples.push_back({1.0, 0.0});

  const double cancel_floor = 1e3 * std::numeric_limits<double>::epsilon();
  bool halted = false;
  auto rhs = [&](double tau, double u) {
    if (!halted) {
      const double S = std::exp(tau);
      if (std::fabs((sigma - u) + (1.0 + u) * S) < cancel_floor * (sigma + S)) halted = true;
    }
    return detail::du_dtau(tau, u, sigma);
  };
  auto jac = [sigma](double tau, double u) { return detail::du_dtau_jac(tau, u, sigma); };
  // The rational right-hand side has a pole at (sigma-u)+(1+u)S = 0 and a
  // spurious branch beyond it; confine every iterate to the physical strip
  // 0 <= u < min(sigma, 1/3), which the true orbit never leaves.
  const double u_cap = std::min(sigma, 1.0 / 3.0);
  auto admissible = [u_cap](double, double u) { return u > -1e-12 && u < u_cap; };

  StiffOptions sopts;
  sopts.rel_tol = cfg.rel_tol;
  sopts.abs_tol = cfg.abs_tol;
  try {
    integrate_stiff(rhs, jac, 0.0, tau_min, 0.0, checkpoints,
                    [&](double tau, double u) {
                      if (halted) return;
                      orbit.samples.push_back({std::exp(tau), u});
                    },
                    admissible, sopts);
  } catch (const std::runtime_error& e) {
    orbit.defects.push_back(std::string("integrator: ") + e.what());
  }

  if (halted) {
    // continue with the asymptotic law u = 1/3 - (4/3) sqrt(S) below the
    // cancellation floor; meaningful only on the sigma = 1/3 orbit
    const double s_halt = orbit.samples.back().S;
    orbit.asymptotic_below_S = s_halt;
    if (std::fabs(sigma - 1.0 / 3.0) < 1e-12) {
      for (double tau : checkpoints) {
        const double S = std::exp(tau);
        if (S < s_halt) orbit.samples.push_back({S, 1.0 / 3.0 - 4.0 / 3.0 * std::sqrt(S)});
      }
    } else {
      orbit.defects.push_back("near-cancellation floor hit away from sigma = 1/3");
    }
  }

  // certification; the invariant-region arguments assume sigma <= 1/3
  const double slack = 1e-9;
  for (std::size_t i = 1; i < orbit.samples.size(); ++i) {
    const auto& [S, u] = orbit.samples[i];
    const auto& prev = orbit.samples[i - 1];
    if (!(S < prev.S) || !(u > prev.u))
      orbit.defects.push_back("monotonicity violated at S=" + std::to_string(S));
    if (orbit.exploratory) continue;
    if (!(S < entropy_boundary_E(u, sigma)))
      orbit.defects.push_back("entropy region violated at S=" + std::to_string(S));
    const double a2 = 1.0 / (3.0 * sigma);
    if (invariant_Q(u, sigma, std::sqrt(a2)) > S + slack)
      orbit.defects.push_back("Q_a lower bound violated at S=" + std::to_string(S));
    const double cap = (u > 0.0) ? std::min(1.0, isocline_h(u, sigma)) : 1.0;
    if (S > cap + slack)
      orbit.defects.push_back("isocline upper bound violated at S=" + std::to_string(S));
  }
  return orbit;
}

inline Orbit integrate_orbit(double sigma, double s_min, double rel_tol) {
  OrbitConfig cfg;
  cfg.s_min = s_min;
  cfg.rel_tol = rel_tol;
  return integrate_orbit(sigma, cfg);
}

/// Shock speed s(S) = (1/sqrt(S)) (sigma-u)/(1+u) at each orbit sample.
inline std::vector<double> speed_along_orbit(const Orbit& orbit) {
  std::vector<double> s;
  s.reserve(orbit.samples.size());
  for (const auto& pt : orbit.samples)
    s.push_back((orbit.sigma - pt.u) / ((1.0 + pt.u) * std::sqrt(pt.S)));
  return s;
}

/// Limit of the shock speed at the Big Bang S -> 0.
enum class SpeedClass { zero, luminal, divergent, inconclusive };

inline const char* to_string(SpeedClass c) {
  switch (c) {
    case SpeedClass::zero: return "zero";
    case SpeedClass::luminal: return "luminal";
    case SpeedClass::divergent: return "divergent";
    default: return "inconclusive";
  }
}

/// Classifies lim_{S->0} s(S) by the trend over the last decade of S:
/// zero for sigma < 1/3, luminal (-> 1) exactly at sigma = 1/3, divergent
/// for sigma > 1/3.  Requires the orbit to reach S <= 1e-8.
inline SpeedClass classify_limit_speed(double sigma, const Orbit& orbit) {
  (void)sigma;
  if (orbit.samples.empty() || orbit.samples.back().S > 1e-8)
    throw std::invalid_argument("classify_limit_speed: orbit must reach S <= 1e-8");
  const std::vector<double> s = speed_along_orbit(orbit);
  const double s_end = s.back();
  const double S_end = orbit.samples.back().S;
  // nearest sample one decade above the endpoint
  std::size_t i_dec = s.size() - 1;
  while (i_dec > 0 && orbit.samples[i_dec].S < 10.0 * S_end) --i_dec;
  const double s_dec = s[i_dec];
  if (s_end > 1.0 + 1e-9) return (s_end > s_dec) ? SpeedClass::divergent : SpeedClass::inconclusive;
  if (std::fabs(s_end - 1.0) <= 0.02)
    return (std::fabs(s_end - 1.0) <= std::fabs(s_dec - 1.0)) ? SpeedClass::luminal
                                                              : SpeedClass::inconclusive;
  if (s_end < 0.5) return (s_end < s_dec) ? SpeedClass::zero : SpeedClass::inconclusive;
  return SpeedClass::inconclusive;
}

/// Least-squares slope (through the origin) of 1/3 - u against sqrt(S)
/// over S in [1e-8, 1e-6]: the Big-Bang asymptotic rate of the sigma = 1/3
/// orbit, expected m* = 4/3.  `sigma_tol` admits orbits within a hair of
/// 1/3, whose gap to the law is far below sqrt(S) across the fit window.
inline double fit_m_star(const Orbit& orbit, double sigma_tol = 1e-12) {
  if (std::fabs(orbit.sigma - 1.0 / 3.0) > sigma_tol)
    throw std::invalid_argument("fit_m_star: requires sigma = 1/3");
  double sxy = 0.0, sxx = 0.0;
  int n = 0;
  for (const auto& pt : orbit.samples) {
    if (pt.S < 1e-8 || pt.S > 1e-6) continue;
    const double x = std::sqrt(pt.S);
    const double y = 1.0 / 3.0 - pt.u;
    sxy += x * y;
    sxx += x * x;
    ++n;
  }
  if (n < 4 || sxx == 0.0)
    throw std::invalid_argument("fit_m_star: orbit must sample S in [1e-8, 1e-6]");
  return sxy / sxx;
}

/// Per-sample membership in the invariant regions plus the boundary-flux
/// inequality |Q_a'(u)| >= |dS/du| sampled along S = Q_a(u), the condition
/// that makes S >= Q_a(u) negatively invariant.
struct InvariantRegionReport {
  std::vector<bool> in_R;      // S <= min(1, h(u)), h test skipped at u = 0
  std::vector<bool> above_Q;   // S >= Q_a(u)
  bool flux_ok = false;        // boundary flux holds along S = Q_a(u)
  double worst_flux_margin = 0.0;
};

inline InvariantRegionReport verify_invariant_regions(const Orbit& orbit,
                                                      double a_squared = 0.0) {
  if (!(orbit.sigma <= 1.0 / 3.0))
    throw std::invalid_argument("verify_invariant_regions: certification assumes sigma <= 1/3");
  const double sigma = orbit.sigma;
  if (a_squared <= 0.0) a_squared = 1.0 / (3.0 * sigma);
  const double a = std::sqrt(a_squared);
  const double slack = 1e-9;

  InvariantRegionReport rep;
  rep.in_R.reserve(orbit.samples.size());
  rep.above_Q.reserve(orbit.samples.size());
  for (const auto& [S, u] : orbit.samples) {
    const double cap = (u > 0.0) ? std::min(1.0, isocline_h(u, sigma)) : 1.0;
    rep.in_R.push_back(S <= cap + slack);
    rep.above_Q.push_back(S + slack >= invariant_Q(u, sigma, a));
  }

  // flux check on the curve S = Q_a(u): |Q'| - |dS/du| >= 0
  rep.flux_ok = true;
  rep.worst_flux_margin = std::numeric_limits<double>::infinity();
  const int n_flux = 256;
  for (int i = 0; i < n_flux; ++i) {
    const double u = sigma * (static_cast<double>(i) / n_flux) * (1.0 - 1e-6);
    const double S = invariant_Q(u, sigma, a);
    if (!(S > 0.0)) continue;
    const double qprime = 2.0 * a_squared * (1.0 + sigma) * (sigma - u) /
                          ((1.0 + u) * (1.0 + u) * (1.0 + u));
    const double ds_du = 1.0 / du_dS(S, u, sigma);
    const double margin = std::fabs(qprime) - std::fabs(ds_du);
    rep.worst_flux_margin = std::min(rep.worst_flux_margin, margin);
    if (margin < -slack) rep.flux_ok = false;
  }
  return rep;
}

}  // namespace cosmoshock
