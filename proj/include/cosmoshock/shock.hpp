#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "cosmoshock/frw.hpp"
#include "cosmoshock/os.hpp"

namespace cosmoshock {

/// Fluid variables on both sides of the shock interface, in the single
/// Schwarzschild coordinate chart matched across it.  N = 2M/rbar at the
/// shock; when built from an FRW state, N = (H rbar)^2.
struct MatchedState {
  double rho = 0.0;     // FRW density
  double p = 0.0;       // FRW pressure
  double rhobar = 0.0;  // TOV density
  double pbar = 0.0;    // TOV pressure
  double N = 0.0;
  double H = 0.0;
  double rbar = 0.0;
};

inline MatchedState matched_from_frw(const FRWState& st, double rbar, double rhobar,
                                     double pbar) {
  MatchedState m;
  m.rho = st.rho;
  m.p = st.p;
  m.rhobar = rhobar;
  m.pbar = pbar;
  m.H = st.H;
  m.rbar = rbar;
  m.N = (st.H * rbar) * (st.H * rbar);
  return m;
}

/// TOV pressure from the single conservation constraint:
///   pbar = (p - c*rho) / (1 + c),  c = ((rhobar + p)/(rho - rhobar))/N.
/// Negative outputs are returned as-is; admissibility is classified by the
/// entropy machinery, not here.
inline double pbar_from_constraint(double rho, double p, double rhobar, double N) {
  if (rho == rhobar)
    throw std::domain_error("pbar_from_constraint: rho == rhobar (vanishing denominator)");
  if (!(N > 0.0)) throw std::domain_error("pbar_from_constraint: N must be positive");
  const double c = (rhobar + p) / (rho - rhobar) / N;
  const double denom = 1.0 + c;
  if (denom == 0.0) throw std::domain_error("pbar_from_constraint: vanishing denominator");
  return (p - c * rho) / denom;
}

/// TOV density from the constraint, algebraic inverse of the above:
///   rhobar = (-(rho + pbar) p + (p - pbar) N rho) / ((rho + pbar) + (p - pbar) N).
inline double rhobar_from_constraint(double rho, double p, double pbar, double N) {
  const double denom = (rho + pbar) + (p - pbar) * N;
  if (denom == 0.0) throw std::domain_error("rhobar_from_constraint: vanishing denominator");
  return (-(rho + pbar) * p + (p - pbar) * N * rho) / denom;
}

/// Dimensionless form of the constraint: v = rhobar/rho from u = pbar/rho,
///   v = (-sigma(1+u) + (sigma-u)N) / ((1+u) + (sigma-u)N).
inline double v_from_u(double u, double sigma, double N) {
  const double denom = (1.0 + u) + (sigma - u) * N;
  if (denom == 0.0) throw std::domain_error("v_from_u: vanishing denominator");
  return (-sigma * (1.0 + u) + (sigma - u) * N) / denom;
}

/// Jump [T]^{mu nu} = T_FRW - T_TOV of the stress tensor at the shock, in
/// (rbar, tbar) coordinates; psi is the integrating-factor boundary value.
struct JumpMatrix {
  double t00 = 0.0;
  double t01 = 0.0;
  double t10 = 0.0;
  double t11 = 0.0;
  double psi = 0.0;
};

inline JumpMatrix jump_matrix(const MatchedState& m, double psi) {
  if (!(m.N > 1.0)) throw std::domain_error("jump_matrix: N must exceed 1 inside the hole");
  if (psi == 0.0) throw std::domain_error("jump_matrix: psi must be nonzero");
  JumpMatrix J;
  const double sum = m.rho + m.p;
  J.t00 = sum * m.N + (m.rhobar + m.p) * (1.0 - m.N);
  J.t01 = psi * std::sqrt(m.N) * sum;
  J.t10 = J.t01;
  J.t11 = psi * psi * ((m.rho + m.pbar) + (m.p - m.pbar) * m.N);
  J.psi = psi;
  return J;
}

/// Jacobian d(rbar, tbar)/d(t, r) of the coordinate identification at the
/// shock: [[sqrt(N), R], [psi, psi R sqrt(N)]].  R enters only through the
/// determinant, which is dropped from the normal below, so any positive
/// value may be passed.
inline std::array<std::array<double, 2>, 2> shock_jacobian(const MatchedState& m, double psi,
                                                           double R = 1.0) {
  const double sqN = std::sqrt(m.N);
  return {{{sqN, R}, {psi, psi * R * sqN}}};
}

/// Covariant shock normal in (rbar, tbar) coordinates.
struct ShockNormal {
  double n0 = 0.0;
  double n1 = 0.0;
};

/// Transforms the FRW-coordinate normal (-rdot, 1) through the inverse of
/// the shock Jacobian (determinant factor dropped), with rdot eliminated
/// via the interface speed R rdot = sqrt(N)(p - pbar)/(rho + pbar).  Up to
/// the dropped positive factor this evaluates to the closed forms
///   n0 = psi (N (p-pbar)/(rho+pbar) + 1),  n1 = -sqrt(N)(rho+p)/(rho+pbar).
inline ShockNormal shock_normal(const MatchedState& m, double psi) {
  if (m.rho + m.pbar == 0.0) throw std::domain_error("shock_normal: rho + pbar must be nonzero");
  const double R = 1.0;  // cancels against the dropped determinant factor
  const auto Jm = shock_jacobian(m, psi, R);
  const double rdot = Jm[0][0] * (m.p - m.pbar) / (m.rho + m.pbar) / R;
  const double n_t = -rdot, n_r = 1.0;
  // adjugate of Jm applied to (n_t, n_r), overall sign flipped to the
  // orientation fixed by the closed forms
  ShockNormal n;
  n.n0 = -(Jm[1][1] * n_t - Jm[1][0] * n_r);
  n.n1 = -(-Jm[0][1] * n_t + Jm[0][0] * n_r);
  return n;
}

/// Rankine-Hugoniot residuals at the shock: det[T] and the two normal
/// contractions n_mu [T]^{mu 0}, n_mu [T]^{mu 1}.  All three vanish when
/// pbar satisfies the conservation constraint; the mu=1 contraction
/// vanishes identically regardless.
struct RHResidual {
  double det = 0.0;
  double contraction0 = 0.0;
  double contraction1 = 0.0;
};

inline RHResidual rankine_hugoniot_residual(const MatchedState& m, double psi) {
  const JumpMatrix J = jump_matrix(m, psi);
  const ShockNormal n = shock_normal(m, psi);
  RHResidual r;
  r.det = J.t00 * J.t11 - J.t01 * J.t10;
  r.contraction0 = n.n0 * J.t00 + n.n1 * J.t10;
  r.contraction1 = n.n0 * J.t01 + n.n1 * J.t11;
  return r;
}

/// True iff the shock surface is non-characteristic for the integrating
/// factor equation: A != (rho+p)/(p-pbar) with A = 1-N.  For p == pbar the
/// ratio is infinite, so any finite A (in particular A < 0) passes.
inline bool noncharacteristic_check(const MatchedState& m) {
  const double A = 1.0 - m.N;
  if (m.p == m.pbar) return true;
  return A != (m.rho + m.p) / (m.p - m.pbar);
}

/// Coordinate shock speed drbar/dt = ((rho+p)/(rho+pbar)) H rbar: the rate
/// at which the shock recedes from an observer fixed at the FRW origin.
inline double shock_speed_coordinate(const MatchedState& m) {
  if (m.rho + m.pbar == 0.0)
    throw std::domain_error("shock_speed_coordinate: rho + pbar must be nonzero");
  return (m.rho + m.p) / (m.rho + m.pbar) * m.H * m.rbar;
}

/// Shock speed relative to the comoving FRW fluid:
///   s = sqrt(N) (sigma - u)/(1 + u).
inline double shock_speed_fluid(double u, double sigma, double N) {
  return std::sqrt(N) * (sigma - u) / (1.0 + u);
}

/// Integrating-factor boundary value psi = +-(A B)^{-1/2} on the shock.
/// Requires A*B > 0 (inside the hole both are negative).  The default sign
/// makes tbar increase with t on the expanding (White Hole) branch.
inline double psi_boundary(double A, double B,
                           TimeOrientation orientation = TimeOrientation::expanding) {
  const double ab = A * B;
  if (!(ab > 0.0)) throw std::domain_error("psi_boundary: A*B must be positive");
  const double mag = 1.0 / std::sqrt(ab);
  return orientation == TimeOrientation::expanding ? -mag : mag;
}

}  // namespace cosmoshock
