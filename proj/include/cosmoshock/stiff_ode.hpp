#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace cosmoshock {

/// Adaptive integrator for a scalar ODE dy/dt = f(t, y) that may be stiff.
///
/// The base step is the two-stage, L-stable SDIRK scheme of Alexander
/// (gamma = 1 - 1/sqrt(2), stiffly accurate).  Each accepted step is computed
/// twice, once with step h and once with two steps h/2; the difference feeds
/// the error estimate and a Richardson extrapolation that lifts the local
/// order to three.  Stage equations are solved by a damped Newton iteration
/// using the caller-supplied df/dy.
///
/// Integration direction is t0 -> t1 with t1 < t0 permitted.  `checkpoints`
/// must be ordered from t0 toward t1; the integrator lands on each one
/// exactly and calls `sink(t, y)` there.  The initial point is not emitted.
struct StiffOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double safety = 0.9;
  double max_factor = 4.0;
  double min_factor = 0.2;
  std::size_t max_steps = 4'000'000;
};

namespace detail {

inline constexpr double sdirk_gamma = 0.29289321881345247560;  // 1 - 1/sqrt(2)

// Solves Y = base + h*gamma*f(ts, Y) by Newton; returns false on failure.
// The right-hand side of a rational system has spurious branches past its
// poles, so every iterate must stay admissible or the step is rejected.
template <class F, class J, class Adm>
bool sdirk_stage(F&& f, J&& dfdy, Adm&& admissible, double ts, double base, double h,
                 double& y_out) {
  const double hg = h * sdirk_gamma;
  if (!admissible(ts, base)) return false;
  double y = base + hg * f(ts, base);  // explicit predictor
  if (!std::isfinite(y) || !admissible(ts, y)) y = base;
  for (int it = 0; it < 25; ++it) {
    const double g = y - base - hg * f(ts, y);
    const double gp = 1.0 - hg * dfdy(ts, y);
    if (gp == 0.0 || !std::isfinite(gp)) return false;
    const double dy = g / gp;
    y -= dy;
    if (!std::isfinite(y) || !admissible(ts, y)) return false;
    if (std::fabs(dy) <= 1e-13 * (std::fabs(y) + 1e-300) + 1e-30) {
      y_out = y;
      return true;
    }
  }
  return false;
}

template <class F, class J, class Adm>
bool sdirk2_step(F&& f, J&& dfdy, Adm&& admissible, double t, double y, double h,
                 double& y_out) {
  const double g = sdirk_gamma;
  double y1 = 0.0;
  if (!sdirk_stage(f, dfdy, admissible, t + g * h, y, h, y1)) return false;
  const double k1 = (y1 - y) / (h * g);
  double y2 = 0.0;
  if (!sdirk_stage(f, dfdy, admissible, t + h, y + h * (1.0 - g) * k1, h, y2)) return false;
  y_out = y2;  // stiffly accurate: b coincides with the last stage row
  return true;
}

}  // namespace detail

template <class F, class J, class Sink, class Adm>
  requires std::predicate<Adm&, double, double>
void integrate_stiff(F&& f, J&& dfdy, double t0, double t1, double y0,
                     std::span<const double> checkpoints, Sink&& sink, Adm&& admissible,
                     const StiffOptions& opts = {}) {
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  double t = t0;
  double y = y0;
  std::size_t next_cp = 0;
  while (next_cp < checkpoints.size() &&
         (checkpoints[next_cp] - t) * dir <= 1e-14 * (std::fabs(t) + 1.0)) {
    sink(checkpoints[next_cp], y);
    ++next_cp;
  }

  double h = dir * std::min(1e-2, std::fabs(t1 - t0));
  std::size_t steps = 0;
  while ((t1 - t) * dir > 1e-14 * (std::fabs(t1) + 1.0)) {
    if (++steps > opts.max_steps)
      throw std::runtime_error("integrate_stiff: step budget exhausted at t=" + std::to_string(t));
    // do not step past the next checkpoint (or the end point)
    double t_stop = (next_cp < checkpoints.size()) ? checkpoints[next_cp] : t1;
    if ((t + h - t_stop) * dir > 0.0) h = t_stop - t;

    double y_big = 0.0, y_mid = 0.0, y_half = 0.0;
    bool ok = detail::sdirk2_step(f, dfdy, admissible, t, y, h, y_big) &&
              detail::sdirk2_step(f, dfdy, admissible, t, y, 0.5 * h, y_mid) &&
              detail::sdirk2_step(f, dfdy, admissible, t + 0.5 * h, y_mid, 0.5 * h, y_half);
    if (!ok) {
      h *= 0.25;
      if (std::fabs(h) < 1e-16 * (std::fabs(t) + 1.0))
        throw std::runtime_error("integrate_stiff: stage iteration failed to converge");
      continue;
    }

    const double err = std::fabs(y_half - y_big) / 3.0;
    const double tol = opts.abs_tol + opts.rel_tol * std::max(std::fabs(y), std::fabs(y_half));
    if (err > tol) {
      const double fac = std::max(opts.min_factor, opts.safety * std::cbrt(tol / (err + 1e-300)));
      h *= fac;
      continue;
    }

    t += h;
    const double y_extrap = y_half + (y_half - y_big) / 3.0;  // Richardson extrapolation
    y = admissible(t, y_extrap) ? y_extrap : y_half;

    while (next_cp < checkpoints.size() &&
           (checkpoints[next_cp] - t) * dir <= 1e-14 * (std::fabs(t) + 1.0)) {
      sink(checkpoints[next_cp], y);
      ++next_cp;
    }

    double fac = opts.safety * std::cbrt(tol / (err + 1e-300));
    fac = std::min(opts.max_factor, std::max(opts.min_factor, fac));
    h *= fac;
  }
}

template <class F, class J, class Sink>
void integrate_stiff(F&& f, J&& dfdy, double t0, double t1, double y0,
                     std::span<const double> checkpoints, Sink&& sink,
                     const StiffOptions& opts = {}) {
  integrate_stiff(f, dfdy, t0, t1, y0, checkpoints, sink,
                  [](double, double) { return true; }, opts);
}

}  // namespace cosmoshock
