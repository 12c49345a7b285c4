#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cosmoshock/estimates.hpp"
#include "cosmoshock/frw.hpp"
#include "cosmoshock/os.hpp"
#include "cosmoshock/phase_plane.hpp"
#include "cosmoshock/reconstruction.hpp"
#include "cosmoshock/shock.hpp"
#include "cosmoshock/tov.hpp"

namespace cosmoshock {

/// Property/invariant batteries behind `verify`.  Each battery checks one
/// family of identities at pinned tolerances and reports pass/fail with a
/// one-line detail.
struct BatteryResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::vector<double> sigma_grid{1e-3, 0.01, 0.05, 0.1, 0.2, 0.3, 1.0 / 3.0};
  double s_min = 1e-9;
  double rel_tol = 1e-10;
  BVariant b_variant = BVariant::dimensional;
  double horizon_eps = 1e-6;
  // sanity gate on |log B_paper - log B_dimensional| over a reference orbit;
  // the two variants are genuinely different resolutions of the printed
  // equation and their spread grows like N_max^2, so the default only
  // rules out non-finite garbage.  Setting it to 0 injects a failure.
  double b_variant_log_tol = 1e30;
  std::string only;  // run a single battery by name when nonempty
};

namespace verify_detail {

struct Check {
  bool pass = true;
  double worst = 0.0;
  std::string note;
  void fail(const std::string& msg) {
    pass = false;
    if (note.empty()) note = msg;
  }
  void track(double margin) { worst = std::max(worst, margin); }
};

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

inline const Orbit& cached_orbit(double sigma, const VerifyOptions& opt,
                                 std::map<double, Orbit>& cache) {
  auto it = cache.find(sigma);
  if (it == cache.end()) {
    OrbitConfig cfg;
    cfg.s_min = opt.s_min;
    cfg.rel_tol = opt.rel_tol;
    it = cache.emplace(sigma, integrate_orbit(sigma, cfg)).first;
  }
  return it->second;
}

}  // namespace verify_detail

inline std::vector<BatteryResult> run_verify(const VerifyOptions& opt = {}) {
  using verify_detail::Check;
  using verify_detail::fmt;
  std::map<double, Orbit> orbits;
  std::vector<BatteryResult> results;
  auto want = [&](const char* name) { return opt.only.empty() || opt.only == name; };
  auto add = [&](const char* name, const Check& c) {
    results.push_back({name, c.pass, c.note.empty() ? "worst " + fmt(c.worst) : c.note});
  };

  if (want("friedmann")) {
    Check c;
    for (double sigma : {0.0, 0.1, 1.0 / 3.0, 0.9}) {
      const FRWBackground bg = background_from_h0(sigma, 1.0);
      for (int k = -3; k <= 3; ++k) {
        const FRWState st = state_at(bg, bg.t0 * std::pow(10.0, k));
        const double res = std::fabs(st.H * st.H - kappa / 3.0 * st.rho) / (st.H * st.H);
        c.track(res);
        if (!(res < 1e-12)) c.fail("Friedmann residual " + fmt(res));
      }
    }
    add("friedmann", c);
  }

  if (want("continuity")) {
    Check c;
    for (double sigma : {0.0, 0.1, 1.0 / 3.0}) {
      const FRWBackground bg = background_from_h0(sigma, 1.0);
      for (int k = -3; k <= 3; ++k) {
        const double t = bg.t0 * std::pow(10.0, k);
        const FRWState st = state_at(bg, t);
        const double rho_dot = -2.0 * st.rho / t;  // closed-form derivative
        const double res =
            std::fabs(rho_dot + 3.0 * (st.p + st.rho) * st.H) / std::fabs(rho_dot);
        c.track(res);
        if (!(res < 1e-10)) c.fail("continuity residual " + fmt(res));
        // finite-difference cross-check at h = t*1e-6 (round-off floor ~eps/2e-6)
        const double h = t * 1e-6;
        const double rho_dot_fd =
            (state_at(bg, t + h).rho - state_at(bg, t - h).rho) / (2.0 * h);
        const double floor = 4.0 * std::numeric_limits<double>::epsilon() * st.rho / h;
        if (!(std::fabs(rho_dot_fd + 3.0 * (st.p + st.rho) * st.H) <
              1e-10 * std::fabs(rho_dot_fd) + floor))
          c.fail("finite-difference continuity residual beyond its floor");
      }
    }
    add("continuity", c);
  }

  if (want("hubble-brackets")) {
    Check c;
    for (int i = 0; i <= 20; ++i) {
      const double sigma = (1.0 / 3.0) * i / 20.0;
      const FRWBackground bg = background_from_h0(sigma, 1.0);
      const double rinf = infinite_redshift_radius(bg);
      if (!(bg.t0 >= 0.5 - 1e-14 && bg.t0 <= 2.0 / 3.0 + 1e-14))
        c.fail("t0 out of Hubble bracket at sigma=" + fmt(sigma));
      if (!(rinf >= 1.0 - 1e-14 && rinf <= 2.0 + 1e-14))
        c.fail("r_inf out of Hubble bracket at sigma=" + fmt(sigma));
    }
    add("hubble-brackets", c);
  }

  if (want("mass-identity")) {
    Check c;
    const FRWBackground bg = background_from_h0(0.2, 1.3);
    for (double t : {0.01, 0.3, 1.0, 40.0}) {
      const FRWState st = state_at(bg, t);
      for (double rbar : {1e-3, 0.5, 2.0 / st.H}) {
        const double lhs = 2.0 * mass_inside(st, rbar) / rbar;
        const double rhs = 1.0 - frw_schwarzschild_A(st, rbar);
        // 1 - A is representation-limited below the unit scale, so the
        // relative tolerance floors there
        const double res = std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs));
        c.track(res);
        if (!(res < 1e-14)) c.fail("mass identity residual " + fmt(res));
      }
    }
    add("mass-identity", c);
  }

  if (want("mass-decay")) {
    Check c;
    for (double sigma : {0.0, 0.1, 1.0 / 3.0, 1.0}) {
      const FRWBackground bg = background_from_h0(sigma, 1.0);
      const double r_comoving = 0.7;
      double sxx = 0, sxy = 0, sx = 0, sy = 0;
      const int n = 25;
      for (int i = 0; i < n; ++i) {
        const double t = bg.t0 * std::pow(10.0, -0.5 + static_cast<double>(i) / (n - 1));
        const FRWState st = state_at(bg, t);
        const double x = std::log(t);
        const double y = std::log(mass_inside(st, st.R * r_comoving));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      const double err = std::fabs(slope - mass_decay_exponent(sigma));
      c.track(err);
      if (!(err < 1e-6)) c.fail("mass-decay exponent off by " + fmt(err));
    }
    add("mass-decay", c);
  }

  if (want("det-jump")) {
    Check c;
    std::mt19937_64 rng(20021218);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      MatchedState m;
      m.rho = std::exp(uni(rng) * 4.0 - 2.0);
      m.rhobar = m.rho * (0.01 + 0.98 * uni(rng));
      const double sigma = 0.999 * uni(rng) + 1e-4;
      m.p = sigma * m.rho;
      m.N = std::exp(std::log(100.0) * uni(rng));
      if (m.N <= 1.0) m.N = 1.0 + 1e-6;
      m.pbar = pbar_from_constraint(m.rho, m.p, m.rhobar, m.N);
      const double psi = uni(rng) < 0.5 ? 1.0 + uni(rng) : -(1.0 + uni(rng));
      const JumpMatrix J = jump_matrix(m, psi);
      const ShockNormal nrm = shock_normal(m, psi);
      const double Tnorm = std::max({std::fabs(J.t00), std::fabs(J.t01), std::fabs(J.t11)});
      const double nnorm = std::max(std::fabs(nrm.n0), std::fabs(nrm.n1));
      const RHResidual res = rankine_hugoniot_residual(m, psi);
      if (!(std::fabs(res.det) < 1e-10 * Tnorm * Tnorm)) c.fail("det residual at i=" + fmt(i));
      if (!(std::fabs(res.contraction0) < 1e-10 * Tnorm * nnorm))
        c.fail("mu0 contraction at i=" + fmt(i));
      if (!(std::fabs(res.contraction1) < 1e-10 * Tnorm * nnorm))
        c.fail("mu1 contraction at i=" + fmt(i));
      // the mu1 contraction must vanish even away from the constraint
      m.pbar = m.pbar + 0.37 * m.p + 0.01;
      const RHResidual off = rankine_hugoniot_residual(m, psi);
      const JumpMatrix J2 = jump_matrix(m, psi);
      const ShockNormal n2 = shock_normal(m, psi);
      const double T2 = std::max({std::fabs(J2.t00), std::fabs(J2.t01), std::fabs(J2.t11)});
      const double n2norm = std::max(std::fabs(n2.n0), std::fabs(n2.n1));
      if (!(std::fabs(off.contraction1) < 1e-12 * T2 * n2norm))
        c.fail("mu1 identity broken off-constraint at i=" + fmt(i));
    }
    add("det-jump", c);
  }

  if (want("entropy-region")) {
    Check c;
    for (double sigma : opt.sigma_grid) {
      if (sigma < sigma_phase_plane_min || sigma > 1.0 / 3.0) continue;
      const Orbit& orbit = verify_detail::cached_orbit(sigma, opt, orbits);
      if (!orbit.defects.empty()) c.fail("orbit defects at sigma=" + fmt(sigma));
      for (std::size_t i = 1; i < orbit.samples.size(); ++i) {
        const auto& [S, u] = orbit.samples[i];
        if (!(S < entropy_boundary_E(u, sigma)))
          c.fail("entropy violated at sigma=" + fmt(sigma) + " S=" + fmt(S));
      }
    }
    add("entropy-region", c);
  }

  if (want("invariant-sandwich")) {
    Check c;
    for (double sigma : opt.sigma_grid) {
      if (sigma < sigma_phase_plane_min || sigma > 1.0 / 3.0) continue;
      const Orbit& orbit = verify_detail::cached_orbit(sigma, opt, orbits);
      const InvariantRegionReport rep = verify_invariant_regions(orbit);
      if (!std::all_of(rep.in_R.begin(), rep.in_R.end(), [](bool b) { return b; }))
        c.fail("R_sigma membership fails at sigma=" + fmt(sigma));
      if (!std::all_of(rep.above_Q.begin(), rep.above_Q.end(), [](bool b) { return b; }))
        c.fail("Q_a membership fails at sigma=" + fmt(sigma));
      if (!rep.flux_ok) c.fail("Q_a boundary flux fails at sigma=" + fmt(sigma));
    }
    add("invariant-sandwich", c);
  }

  if (want("speed-limits")) {
    Check c;
    for (double sigma : {0.05, 0.1, 0.2, 0.3}) {
      const Orbit& orbit = verify_detail::cached_orbit(sigma, opt, orbits);
      const auto s = speed_along_orbit(orbit);
      const double smax = *std::max_element(s.begin(), s.end());
      if (!(smax <= std::sqrt(3.0 * sigma) + 1e-9))
        c.fail("speed bound sqrt(3 sigma) broken at sigma=" + fmt(sigma));
      if (classify_limit_speed(sigma, orbit) != SpeedClass::zero)
        c.fail("limit speed not zero at sigma=" + fmt(sigma));
    }
    {
      const Orbit& orbit = verify_detail::cached_orbit(1.0 / 3.0, opt, orbits);
      const auto s = speed_along_orbit(orbit);
      if (!(*std::max_element(s.begin(), s.end()) < 1.0)) c.fail("sigma=1/3 not subluminous");
      double s8 = 0.0;
      for (std::size_t i = 0; i < orbit.samples.size(); ++i)
        if (std::fabs(orbit.samples[i].S - 1e-8) < 1e-10) s8 = s[i];
      if (!(s8 >= 0.98 && s8 <= 1.0)) c.fail("s(1e-8) outside [0.98, 1] at sigma=1/3");
      if (classify_limit_speed(1.0 / 3.0, orbit) != SpeedClass::luminal)
        c.fail("sigma=1/3 not classified luminal");
    }
    {
      const Orbit& orbit = verify_detail::cached_orbit(0.4, opt, orbits);
      const auto s = speed_along_orbit(orbit);
      if (!(*std::max_element(s.begin(), s.end()) > 1.0)) c.fail("sigma=0.4 stays subluminous");
      if (classify_limit_speed(0.4, orbit) != SpeedClass::divergent)
        c.fail("sigma=0.4 not classified divergent");
    }
    add("speed-limits", c);
  }

  if (want("m-star")) {
    Check c;
    const Orbit& orbit = verify_detail::cached_orbit(1.0 / 3.0, opt, orbits);
    const double m = fit_m_star(orbit);
    const double rel = std::fabs(m - 4.0 / 3.0) / (4.0 / 3.0);
    c.track(rel);
    if (!(rel < 0.02)) c.fail("m* = " + fmt(m) + " off 4/3 by " + fmt(rel));
    add("m-star", c);
  }

  if (want("observability-brackets")) {
    Check c;
    for (double sigma : opt.sigma_grid) {
      if (sigma < sigma_phase_plane_min || sigma > 1.0 / 3.0) continue;
      const Orbit& orbit = verify_detail::cached_orbit(sigma, opt, orbits);
      const RTable rt = integrate_r(orbit);
      const ObservabilityReport rep = numeric_report(sigma, rt.S, rt.r);
      if (!(rep.sqrtN0_lower - 1e-9 <= rep.sqrtN0_numeric &&
            rep.sqrtN0_numeric <= rep.sqrtN0_upper + 1e-9))
        c.fail("sqrtN0 outside bracket at sigma=" + fmt(sigma));
      if (!(rep.tcrit_ratio_lower - 1e-9 <= rep.tcrit_ratio_numeric &&
            rep.tcrit_ratio_numeric <= rep.tcrit_ratio_upper + 1e-9))
        c.fail("tcrit ratio outside bracket at sigma=" + fmt(sigma));
    }
    add("observability-brackets", c);
  }

  if (want("os-limit")) {
    Check c;
    {
      const Orbit& orbit = verify_detail::cached_orbit(1e-3, opt, orbits);
      const RTable rt = integrate_r(orbit);
      const ObservabilityReport rep = numeric_report(1e-3, rt.S, rt.r);
      if (!(std::fabs(rep.sqrtN0_numeric - 2.0) < 0.1))
        c.fail("sqrtN0 not within 5% of the OS value 2");
      if (!(std::fabs(rep.tcrit_ratio_numeric - 2.0) < 0.1))
        c.fail("tcrit ratio not within 5% of the OS value 2");
      if (!(std::fabs(rt.r.back() - 1.0) < 0.05)) c.fail("r(1)/r* not within 5% of 1");
    }
    for (double M : {0.75, 1.0, 17.0}) {
      // root of rbar(t) = 2M against the closed form t_s = 4M/3
      double lo = 0.1 * M, hi = 100.0 * M;
      auto f = [M](double t) {
        return shock_surface_rbar(M, 4.0 / (3.0 * kappa * t * t)) - 2.0 * M;
      };
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
      }
      const double root = 0.5 * (lo + hi);
      const double rel = std::fabs(root - horizon_crossing_time(M)) / horizon_crossing_time(M);
      c.track(rel);
      if (!(rel < 1e-10)) c.fail("horizon-crossing closed form off by " + fmt(rel));
    }
    for (double t : {0.3, 1.0, 5.0}) {
      const FRWBackground bg = background_from_h0(0.0, 1.0);
      const FRWState st = state_at(bg, t);
      const double r0 = 0.8;
      const double Rdot = st.H * st.R;
      const auto [cs, is] =
          characteristic_vs_interface(st.H, st.R * r0, TimeOrientation::expanding, r0, Rdot);
      if (!(std::fabs(std::fabs(cs - is) - 1.0) < 1e-14))
        c.fail("characteristic/interface gap != 1");
    }
    add("os-limit", c);
  }

  if (want("reconstruction")) {
    Check c;
    for (double sigma : {0.1, 1.0 / 3.0}) {
      OrbitConfig cfg;
      cfg.s_min = opt.s_min;
      cfg.rel_tol = opt.rel_tol;
      cfg.points_per_decade = 400;  // dense grid for the finite-difference route
      const Orbit orbit = integrate_orbit(sigma, cfg);
      const double H0 = visibility_product(sigma);
      const ShockSolution sol = assemble(orbit, H0, opt.b_variant, opt.horizon_eps);
      const double t0 = 2.0 / (3.0 * (1.0 + sigma) * H0);
      for (const auto& w : sol.rows) {
        const double H = H0 * t0 / w.t;
        const double id1 = std::fabs(w.N - (H * w.rbar) * (H * w.rbar)) / w.N;
        const double id2 = std::fabs(w.rho - 3.0 * w.N / (kappa * w.rbar * w.rbar)) / w.rho;
        const double mass = kappa / 6.0 * w.rho * w.rbar * w.rbar * w.rbar;
        const double id3 = std::fabs(mass - w.N * w.rbar / 2.0) / mass;
        c.track(std::max({id1, id2, id3}));
        if (!(id1 < 1e-10 && id2 < 1e-10 && id3 < 1e-10))
          c.fail("row identity broken at S=" + fmt(w.S));
        if (w.S < 1.0 && !(w.pbar > 0.0 && w.pbar < w.p && w.rhobar > 0.0 && w.rhobar < w.rho))
          c.fail("entropy ordering broken at S=" + fmt(w.S));
      }
      for (std::size_t i = 1; i + 1 < sol.rows.size(); ++i) {
        const auto &a = sol.rows[i - 1], &b = sol.rows[i], &d = sol.rows[i + 1];
        if (!(b.t > a.t && b.r > a.r && b.N < a.N)) c.fail("row ordering broken");
        const double hm = b.t - a.t, hp = d.t - b.t;
        const double drdt =
            (hm * hm * d.r - hp * hp * a.r + (hp * hp - hm * hm) * b.r) / (hm * hp * (hm + hp));
        const double R = b.rbar / b.r;
        const double rel = std::fabs(R * drdt - b.s) / std::fabs(b.s);
        if (!(rel < 1e-4)) c.fail("speed routes disagree by " + fmt(rel));
      }
    }
    add("reconstruction", c);
  }

  if (want("b-variant")) {
    Check c;
    const Orbit& orbit = verify_detail::cached_orbit(0.1, opt, orbits);
    const double H0 = visibility_product(0.1);
    const ShockSolution dim = assemble(orbit, H0, BVariant::dimensional, opt.horizon_eps);
    const ShockSolution lit = assemble(orbit, H0, BVariant::paper_literal, opt.horizon_eps);
    double spread = 0.0;
    for (std::size_t i = 0; i < dim.rows.size(); ++i) {
      if (dim.rows[i].N <= 1.0 + opt.horizon_eps) continue;
      if (!std::isfinite(dim.rows[i].log_B) || !std::isfinite(lit.rows[i].log_B))
        c.fail("non-finite log B");
      spread = std::max(spread, std::fabs(dim.rows[i].log_B - lit.rows[i].log_B));
    }
    c.track(spread);
    if (!(spread <= opt.b_variant_log_tol))
      c.fail("B variants differ by log spread " + fmt(spread) + " > tol");
    add("b-variant", c);
  }

  return results;
}

}  // namespace cosmoshock
