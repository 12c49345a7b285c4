#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "cosmoshock/reconstruction.hpp"

namespace cosmoshock {

namespace detail {
inline bool is_third(double sigma) { return std::fabs(sigma - 1.0 / 3.0) < 1e-12; }
}  // namespace detail

/// H0 r_* = 2/(1+3 sigma): the Hubble constant at the moment the shock
/// first becomes visible at the FRW center, times its Big-Bang position.
inline double visibility_product(double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0 / 3.0))
    throw std::invalid_argument("visibility_product: sigma must lie in [0, 1/3]");
  return 2.0 / (1.0 + 3.0 * sigma);
}

/// Bounds on the Hubble count sqrt(N0) at first visibility:
///   2/(1+3s) <= sqrt(N0) <= (2/(1+3s)) exp(sqrt(3s)(1+3s)/(1+s)).
inline std::pair<double, double> sqrtN0_bounds(double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0 / 3.0))
    throw std::invalid_argument("sqrtN0_bounds: sigma must lie in [0, 1/3]");
  const double lower = 2.0 / (1.0 + 3.0 * sigma);
  const double upper =
      lower * std::exp(std::sqrt(3.0 * sigma) * (1.0 + 3.0 * sigma) / (1.0 + sigma));
  return {lower, upper};
}

/// Bounds on t_crit/t0, the emergence-to-visibility time ratio:
///   (2/(1+3s)) e^{s/4} <= t_crit/t0 <= (2/(1+3s)) e^{2 sqrt(3s)/(1+s)},
/// improved to [e^{sqrt(6)/4}, e^{3/2}] at sigma = 1/3.
inline std::pair<double, double> tcrit_ratio_bounds(double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0 / 3.0))
    throw std::invalid_argument("tcrit_ratio_bounds: sigma must lie in [0, 1/3]");
  if (detail::is_third(sigma))
    return {std::exp(std::sqrt(6.0) / 4.0), std::exp(1.5)};
  const double pre = 2.0 / (1.0 + 3.0 * sigma);
  return {pre * std::exp(sigma / 4.0),
          pre * std::exp(2.0 * std::sqrt(3.0 * sigma) / (1.0 + sigma))};
}

/// Bounds on r(S0)/r_*:
///   e^{s S0/4} <= r0/r_* <= e^{2 sqrt(3 s S0)/(1+s)},
/// improved to [e^{sqrt(6 S0)/4}, e^{(3/2) sqrt(S0)}] at sigma = 1/3.
inline std::pair<double, double> position_bounds(double sigma, double S0) {
  if (!(sigma > 0.0 && sigma <= 1.0 / 3.0))
    throw std::invalid_argument("position_bounds: sigma must lie in (0, 1/3]");
  if (!(S0 > 0.0 && S0 <= 1.0)) throw std::invalid_argument("position_bounds: S0 must lie in (0, 1]");
  if (detail::is_third(sigma))
    return {std::exp(std::sqrt(6.0 * S0) / 4.0), std::exp(1.5 * std::sqrt(S0))};
  return {std::exp(sigma * S0 / 4.0),
          std::exp(2.0 * std::sqrt(3.0 * sigma * S0) / (1.0 + sigma))};
}

/// Numeric observability quantities of one solution, next to the analytic
/// brackets they must respect.
struct ObservabilityReport {
  double sigma = 0.0;
  double H0_r_star = 0.0;
  double S0 = 0.0;
  double sqrtN0_numeric = 0.0, sqrtN0_lower = 0.0, sqrtN0_upper = 0.0;
  double tcrit_ratio_numeric = 0.0, tcrit_ratio_lower = 0.0, tcrit_ratio_upper = 0.0;
};

namespace detail {

// log-linear interpolation of r(S) between table rows
inline double interp_r(const std::vector<double>& S, const std::vector<double>& r, double s) {
  const double ls = std::log(s);
  std::size_t lo = 0, hi = S.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (S[mid] <= s ? lo : hi) = mid;
  }
  const double l0 = std::log(S[lo]), l1 = std::log(S[hi]);
  const double w = (ls - l0) / (l1 - l0);
  return std::exp((1.0 - w) * std::log(r[lo]) + w * std::log(r[hi]));
}

}  // namespace detail

/// Builds the report from the (S, r) trace of a solution normalized to
/// r_* = 1 with H0 fixed by the visibility condition H0 r_* = 2/(1+3 sigma).
/// S0 solves S (H0 r(S))^2 = 1 (monotone; bisection to 1e-12 in S), and
///   sqrt(N0) = 1/sqrt(S0),   t_crit/t0 = H0 r(1),
/// the latter being H0 times the comoving shock coordinate at emergence
/// (S = 1), the quantity the closed-form brackets bound.
inline ObservabilityReport numeric_report(double sigma, const std::vector<double>& S,
                                          const std::vector<double>& r) {
  if (S.size() < 2 || S.size() != r.size())
    throw std::invalid_argument("numeric_report: need a matching (S, r) trace");
  ObservabilityReport rep;
  rep.sigma = sigma;
  rep.H0_r_star = visibility_product(sigma);
  const double H0 = rep.H0_r_star;  // r_* = 1

  auto f = [&](double s) { return s * std::pow(H0 * detail::interp_r(S, r, s), 2) - 1.0; };
  double lo = S.front(), hi = S.back();  // ascending table
  if (!(f(lo) < 0.0 && f(hi) >= 0.0))
    throw std::runtime_error("numeric_report: root S0 not bracketed in (s_min, 1]");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  rep.S0 = 0.5 * (lo + hi);
  rep.sqrtN0_numeric = 1.0 / std::sqrt(rep.S0);
  rep.tcrit_ratio_numeric = H0 * r.back();
  std::tie(rep.sqrtN0_lower, rep.sqrtN0_upper) = sqrtN0_bounds(sigma);
  std::tie(rep.tcrit_ratio_lower, rep.tcrit_ratio_upper) = tcrit_ratio_bounds(sigma);
  return rep;
}

/// Report for an assembled solution; requires the solution to be normalized
/// by the visibility condition (H0 = 2/((1+3 sigma) r_*)).
inline ObservabilityReport numeric_report(const ShockSolution& sol) {
  const double want = visibility_product(sol.sigma) / sol.r_star;
  if (std::fabs(sol.h0 - want) > 1e-9 * want)
    throw std::invalid_argument(
        "numeric_report: solution must be built with the visibility H0 = 2/((1+3 sigma) r_*)");
  std::vector<double> S, r;
  S.reserve(sol.rows.size());
  r.reserve(sol.rows.size());
  for (const auto& row : sol.rows) {
    S.push_back(row.S);
    r.push_back(row.r);
  }
  return numeric_report(sol.sigma, S, r);
}

/// Observability quantities of the zero-pressure OS solution: the shock sits
/// at constant comoving radius, so r(S) = r_* and the report collapses to
/// sqrt(N0) = t_crit/t0 = 2 exactly.
inline ObservabilityReport os_report() {
  ObservabilityReport rep;
  rep.sigma = 0.0;
  rep.H0_r_star = 2.0;
  rep.S0 = 0.25;
  rep.sqrtN0_numeric = 2.0;
  rep.tcrit_ratio_numeric = 2.0;
  std::tie(rep.sqrtN0_lower, rep.sqrtN0_upper) = sqrtN0_bounds(0.0);
  std::tie(rep.tcrit_ratio_lower, rep.tcrit_ratio_upper) = tcrit_ratio_bounds(0.0);
  return rep;
}

}  // namespace cosmoshock
