#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cosmoshock/constants.hpp"
#include "cosmoshock/phase_plane.hpp"
#include "cosmoshock/shock.hpp"
#include "cosmoshock/tov.hpp"

namespace cosmoshock {

/// dr/dS = (sigma-u)/((1+sigma)(1+3u)) * r/S: the shock position in the
/// comoving FRW coordinate r as a function of S along the orbit.
inline double dr_dS(double S, double u, double r, double sigma) {
  if (!(S > 0.0)) throw std::domain_error("dr_dS: S must be positive");
  return (sigma - u) / ((1.0 + sigma) * (1.0 + 3.0 * u)) * r / S;
}

/// r(S) on the orbit grid, normalized by the Big-Bang limit r_* = 1:
///   r(S) = exp( int_0^S (sigma-u)/(1+3u) dS'/((1+sigma) S') ).
/// The integrand is bounded by sqrt(3 sigma S)/(1+sigma), so the limit
/// exists; the unsampled tail below s_min contributes at most a factor
/// exp(tail_log_bound) to every r, reported as an error bar on r_*.
struct RTable {
  std::vector<double> S;  // ascending
  std::vector<double> r;  // r(S)/r_*, ascending
  double r_star = 1.0;
  double tail_log_bound = 0.0;
  std::vector<std::string> defects;
};

inline RTable integrate_r(const Orbit& orbit) {
  if (orbit.samples.size() < 2) throw std::invalid_argument("integrate_r: orbit too short");
  const double sigma = orbit.sigma;
  const std::size_t n = orbit.samples.size();

  RTable table;
  table.S.resize(n);
  table.r.resize(n);
  const double s_min = orbit.samples.back().S;
  table.tail_log_bound = 2.0 * std::sqrt(3.0 * sigma * s_min) / (1.0 + sigma);

  // orbit samples run from S = 1 down; accumulate ln r upward from s_min
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [S, u] = orbit.samples[i];
    g[i] = (sigma - u) / ((1.0 + sigma) * (1.0 + 3.0 * u));
    if (!orbit.exploratory && (sigma - u) / (1.0 + 3.0 * u) > std::sqrt(3.0 * sigma * S) + 1e-9)
      table.defects.push_back("integrand bound violated at S=" + std::to_string(S));
  }
  double lnr = 0.0;
  table.S[0] = orbit.samples[n - 1].S;
  table.r[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t i = n - 1 - k;       // walking toward S = 1
    const double tau_hi = std::log(orbit.samples[i].S);
    const double tau_lo = std::log(orbit.samples[i + 1].S);
    lnr += 0.5 * (g[i] + g[i + 1]) * (tau_hi - tau_lo);  // dS/S = dtau
    table.S[k] = orbit.samples[i].S;
    table.r[k] = std::exp(lnr);
  }
  return table;
}

/// t(rho) = sqrt(4/(3 kappa (1+sigma)^2 rho)): inversion of the FRW
/// density-time relation.
inline double time_of_density(double rho, double sigma) {
  if (!(rho > 0.0)) throw std::domain_error("time_of_density: rho must be positive");
  return std::sqrt(4.0 / (3.0 * kappa * (1.0 + sigma) * (1.0 + sigma) * rho));
}

/// One fully reconstructed shock state.
struct ShockSolutionRow {
  double S = 0.0, N = 0.0, u = 0.0, v = 0.0;
  double rbar = 0.0, r = 0.0, t = 0.0;
  double rho = 0.0, p = 0.0, pbar = 0.0, rhobar = 0.0;
  double s = 0.0;         // fluid-relative shock speed
  double B = 0.0;         // TOV metric coefficient (see B_valid)
  double log_B = 0.0;     // always finite; B = exp(log_B) where representable
  bool B_valid = false;   // false within horizon_eps of N = 1 or when exp(log_B) leaves double range
  bool entropy_ok = false;
  bool invariant_ok = false;
};

/// The assembled shock-wave spacetime along one orbit.  Rows are ordered by
/// increasing FRW time t (decreasing N); r is normalized so r_* = 1 and the
/// physical scale enters through H0 alone.
struct ShockSolution {
  double sigma = 0.0;
  double h0 = 0.0;
  std::vector<ShockSolutionRow> rows;
  double r_star = 1.0;
  double r_star_tail_log_bound = 0.0;
  bool exploratory = false;
  BVariant b_variant = BVariant::dimensional;
};

/// Reconstructs every row quantity from the orbit:
///   N = 1/S, R = (H0 r sqrt(S))^{2/(1+3 sigma)}, rho = rho0 R^{-3(1+sigma)}
///   (the inverted density-time map), t = t(rho), H = H0 t0/t, rbar = R r,
///   v/pbar/rhobar from the conservation constraint and s = sqrt(N)(sigma-u)/(1+u).
/// B is integrated over the rows' own grid from the smallest valid N with
/// B0 = 1 there; rows inside the horizon guard carry no B.
inline ShockSolution assemble(const Orbit& orbit, double H0,
                              BVariant b_variant = BVariant::dimensional,
                              double horizon_eps = 1e-6) {
  if (!(H0 > 0.0)) throw std::invalid_argument("assemble: H0 must be positive");
  const double sigma = orbit.sigma;
  const RTable rt = integrate_r(orbit);
  const std::size_t n = rt.S.size();
  const double t0 = 2.0 / (3.0 * (1.0 + sigma) * H0);
  const double rho0 = 4.0 / (3.0 * kappa * (1.0 + sigma) * (1.0 + sigma) * t0 * t0);

  ShockSolution sol;
  sol.sigma = sigma;
  sol.h0 = H0;
  sol.exploratory = orbit.exploratory;
  sol.b_variant = b_variant;
  sol.r_star = 1.0;
  sol.r_star_tail_log_bound = rt.tail_log_bound;
  sol.rows.resize(n);

  // rows ascend in t, i.e. ascend in S; orbit samples descend in S
  for (std::size_t k = 0; k < n; ++k) {
    ShockSolutionRow& row = sol.rows[k];
    const auto& pt = orbit.samples[n - 1 - k];
    row.S = pt.S;
    row.u = pt.u;
    row.r = rt.r[k];
    row.N = 1.0 / row.S;
    const double R = std::pow(H0 * row.r * std::sqrt(row.S), 2.0 / (1.0 + 3.0 * sigma));
    row.rho = rho0 * std::pow(R, -3.0 * (1.0 + sigma));
    row.t = time_of_density(row.rho, sigma);
    row.rbar = R * row.r;
    row.p = sigma * row.rho;
    row.v = v_from_u(row.u, sigma, row.N);
    row.pbar = row.u * row.rho;
    row.rhobar = row.v * row.rho;
    row.s = shock_speed_fluid(row.u, sigma, row.N);

    const double Eu = entropy_boundary_E(row.u, sigma);
    row.entropy_ok = (row.S < Eu) || (row.S == 1.0 && row.u == 0.0);
    const double cap = (row.u > 0.0) ? std::min(1.0, isocline_h(row.u, sigma)) : 1.0;
    const bool above_q =
        sigma <= 1.0 / 3.0
            ? invariant_Q(row.u, sigma, std::sqrt(1.0 / (3.0 * sigma))) <= row.S + 1e-9
            : true;
    row.invariant_ok = (row.S <= cap + 1e-9) && above_q;
  }

  // B over the valid rows, anchored B0 = 1 at the smallest valid N (the
  // latest valid time); with rows ascending in t, N descends, so walk the
  // rows backwards to build an N-ascending grid.
  std::vector<BSample> grid;
  std::vector<std::size_t> grid_rows;
  for (std::size_t k = n; k-- > 0;) {
    const ShockSolutionRow& row = sol.rows[k];
    if (row.N > 1.0 + horizon_eps) {
      grid.push_back({row.N, row.rbar, row.rhobar});
      grid_rows.push_back(k);
    }
  }
  if (grid.size() >= 1) {
    const std::vector<double> logB = log_metric_B(grid, 0.0, b_variant, horizon_eps);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      ShockSolutionRow& row = sol.rows[grid_rows[j]];
      row.log_B = logB[j];
      if (std::fabs(logB[j]) < 700.0) {  // exp stays inside double range
        row.B = std::exp(logB[j]);
        row.B_valid = true;
      }
    }
  }
  return sol;
}

}  // namespace cosmoshock
