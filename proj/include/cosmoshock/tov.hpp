#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "cosmoshock/constants.hpp"

namespace cosmoshock {

/// State of the TOV metric inside the black hole at one value of the
/// (timelike) radial coordinate rbar.  N = 2M/rbar = 1 - A exceeds 1
/// inside the hole; B is the magnitude of the dtbar^2 coefficient.
struct TOVState {
  double rbar = 0.0;
  double pbar = 0.0;
  double rhobar = 0.0;
  double N = 0.0;
  double B = 0.0;
};

struct TOVDerivsN {
  double dpbar_drbar = 0.0;
  double dN_drbar = 0.0;
};

struct TOVDerivsA {
  double dpbar_drbar = 0.0;
  double dA_drbar = 0.0;
};

/// TOV-inside-the-black-hole system in the N = 1 - A variable:
///   N'    = -(N/rbar + kappa pbar rbar)
///   pbar' = ((pbar + rhobar)/2) N'/(N - 1)
inline TOVDerivsN tov_rhs(double rbar, double pbar, double N, double rhobar) {
  if (!(rbar > 0.0)) throw std::domain_error("tov_rhs: rbar must be positive");
  if (N == 1.0) throw std::domain_error("tov_rhs: N = 1 is the horizon (coordinate singularity)");
  TOVDerivsN d;
  d.dN_drbar = -(N / rbar + kappa * pbar * rbar);
  d.dpbar_drbar = 0.5 * (pbar + rhobar) * d.dN_drbar / (N - 1.0);
  return d;
}

/// Same system in the A variable:
///   A'    = (1 - A)/rbar + kappa pbar rbar
///   pbar' = ((pbar + rhobar)/2) A'/A
inline TOVDerivsA tov_rhs_A_form(double rbar, double pbar, double A, double rhobar) {
  if (!(rbar > 0.0)) throw std::domain_error("tov_rhs_A_form: rbar must be positive");
  if (A == 0.0) throw std::domain_error("tov_rhs_A_form: A = 0 is the horizon");
  TOVDerivsA d;
  d.dA_drbar = (1.0 - A) / rbar + kappa * pbar * rbar;
  d.dpbar_drbar = 0.5 * (pbar + rhobar) * d.dA_drbar / A;
  return d;
}

/// Which form of the B-equation integrand to use.  The printed equation
/// sums N/rbar (1/length) with kappa*rhobar (1/length^2); `dimensional`
/// multiplies the density term by rbar to match the structure of the
/// kappa*pbar*rbar term in the A-equation, `paper_literal` keeps it as is.
enum class BVariant { dimensional, paper_literal };

/// One quadrature node for metric_B.
struct BSample {
  double N = 0.0;
  double rbar = 0.0;
  double rhobar = 0.0;
};

inline double b_integrand(const BSample& s, BVariant variant) {
  const double w = (variant == BVariant::dimensional) ? s.rbar : 1.0;
  return (s.N / s.rbar + kappa * s.rhobar * w) / (s.N - 1.0);
}

/// log B(N) relative to log B0 by composite trapezoid over the supplied
/// grid:  log B_i = log B0 - int_{N_0}^{N_i} (1/(xi-1)) (xi/rbar + kappa
/// rhobar w) dxi.  The grid must be strictly monotone in N and stay at
/// least horizon_eps above the N = 1 pole; no internal re-gridding is done.
inline std::vector<double> log_metric_B(std::span<const BSample> samples, double log_B0,
                                        BVariant variant, double horizon_eps = 1e-6) {
  if (samples.empty()) throw std::invalid_argument("metric_B: empty sample list");
  const bool increasing = samples.size() < 2 || samples[1].N > samples[0].N;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].N > 1.0 + horizon_eps))
      throw std::domain_error("metric_B: sample touches the horizon guard N <= 1 + eps");
    if (!(samples[i].rbar > 0.0)) throw std::domain_error("metric_B: rbar must be positive");
    if (i > 0 && ((samples[i].N > samples[i - 1].N) != increasing ||
                  samples[i].N == samples[i - 1].N))
      throw std::invalid_argument("metric_B: samples must be strictly monotone in N");
  }
  std::vector<double> logB(samples.size());
  logB[0] = log_B0;
  double f_prev = b_integrand(samples[0], variant);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double f = b_integrand(samples[i], variant);
    logB[i] = logB[i - 1] - 0.5 * (f_prev + f) * (samples[i].N - samples[i - 1].N);
    f_prev = f;
  }
  return logB;
}

/// B(N) itself; B0 must be positive.  Over deep orbits log B spans far
/// beyond double range, so callers needing those regimes should use
/// log_metric_B directly.
inline std::vector<double> metric_B(std::span<const BSample> samples, double B0,
                                    BVariant variant, double horizon_eps = 1e-6) {
  if (!(B0 > 0.0)) throw std::invalid_argument("metric_B: B0 must be positive");
  std::vector<double> out = log_metric_B(samples, std::log(B0), variant, horizon_eps);
  for (double& b : out) b = std::exp(b);
  return out;
}

}  // namespace cosmoshock
