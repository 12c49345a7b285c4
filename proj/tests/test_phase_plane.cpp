#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "cosmoshock/phase_plane.hpp"

using namespace cosmoshock;
using Catch::Approx;

TEST_CASE("du/dS spot values") {
  CHECK(du_dS(1.0, 0.0, 1.0 / 3.0) == Approx(-1.0 / 8.0).epsilon(1e-15));
  for (double sigma : {0.1, 0.25}) {
    CHECK(du_dS(1.0, 0.0, sigma) == Approx(-sigma / (2.0 * (1.0 + sigma))).epsilon(1e-14));
    // reciprocal at the starting point: dS/du matches the slope of the
    // entropy boundary, E'(0) = -2(1+sigma)/sigma
    CHECK(1.0 / du_dS(1.0, 0.0, sigma) ==
          Approx(-2.0 * (1.0 + sigma) / sigma).epsilon(1e-14));
  }
  CHECK(du_dS(0.5, 1.0 / 3.0, 1.0 / 3.0) == Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(du_dS(0.2, 1.0 / 3.0, 1.0 / 3.0) == Approx(2.0 / (3.0 * 0.2)).epsilon(1e-14));
  CHECK_THROWS_AS(du_dS(0.0, 0.1, 0.3), std::domain_error);
}

TEST_CASE("autonomous field agrees with the scalar equation") {
  const auto [F0, G0] = autonomous_field(0.0, 0.17, 0.3);
  CHECK(F0 == 0.0);  // S = 0 axis is invariant
  const auto [Fr1, Gr1] = autonomous_field(0.0, 0.3, 0.3);
  CHECK(Fr1 == 0.0);
  CHECK(Gr1 == Approx(0.0).margin(1e-16));  // rest point (0, sigma)
  const auto [Fr2, Gr2] = autonomous_field(0.0, 1.0 / 3.0, 0.3);
  CHECK(Fr2 == 0.0);
  CHECK(Gr2 == Approx(0.0).margin(1e-16));  // rest point (0, 1/3)

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double sigma = 0.05 + 0.9 * uni(rng);
    const double S = 1e-4 + uni(rng);
    const double u = std::min(sigma, 1.0 / 3.0) * 0.99 * uni(rng);
    const auto [F, G] = autonomous_field(S, u, sigma);
    if (F == 0.0) continue;
    CHECK(du_dS(S, u, sigma) == Approx(G / F).epsilon(1e-13));
  }
}

TEST_CASE("isocline, entropy boundary, invariant parabola") {
  CHECK(isocline_h(1.0 / 3.0, 1.0 / 3.0) == 0.0);
  CHECK(isocline_h(0.2, 0.2) == 0.0);
  CHECK(isocline_h(0.1, 1.0 / 3.0) == Approx(0.24747474747474746).epsilon(1e-14));
  CHECK_THROWS_AS(isocline_h(0.0, 0.3), std::domain_error);
  // strictly decreasing on (0, min(sigma, 1/3))
  for (double sigma : {0.1, 1.0 / 3.0}) {
    double prev = isocline_h(1e-4, sigma);
    for (int i = 1; i <= 50; ++i) {
      const double u = 1e-4 + (std::min(sigma, 1.0 / 3.0) - 2e-4) * i / 50.0;
      const double h = isocline_h(u, sigma);
      CHECK(h < prev);
      prev = h;
    }
  }

  CHECK(entropy_boundary_E(0.0, 0.3) == 1.0);
  CHECK(entropy_boundary_E(0.3, 0.3) == 0.0);
  CHECK(entropy_boundary_E(0.1, 1.0 / 3.0) ==
        Approx((0.9 / 1.1) * ((1.0 / 3.0 - 0.1) / (1.0 / 3.0 + 0.1))).epsilon(1e-14));

  CHECK(invariant_Q(0.25, 0.25, 3.0) == 0.0);
  CHECK(invariant_Q(0.0, 0.3, std::sqrt(1.0 / (3.0 * 0.3))) == Approx(0.1).epsilon(1e-14));
  CHECK(invariant_Q(0.0, 1.0 / 3.0, 1.0) == Approx(1.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("orbit integration: start, monotonicity, certification") {
  for (double sigma : {0.01, 0.1, 0.3, 1.0 / 3.0}) {
    const Orbit orbit = integrate_orbit(sigma, 1e-9, 1e-10);
    INFO("sigma = " << sigma);
    CHECK(orbit.defects.empty());
    CHECK_FALSE(orbit.exploratory);
    REQUIRE(orbit.samples.size() > 100);
    CHECK(orbit.samples.front().S == 1.0);
    CHECK(orbit.samples.front().u == 0.0);
    // the entropy boundary is touched exactly at the starting point only
    CHECK(orbit.samples.front().S == entropy_boundary_E(orbit.samples.front().u, sigma));
    CHECK(orbit.samples.back().S == Approx(1e-9).epsilon(1e-12));
    for (std::size_t i = 1; i < orbit.samples.size(); ++i) {
      CHECK(orbit.samples[i].S < orbit.samples[i - 1].S);
      CHECK(orbit.samples[i].u > orbit.samples[i - 1].u);
      CHECK(orbit.samples[i].S < entropy_boundary_E(orbit.samples[i].u, sigma));
    }
    // limit law from the Q_a bound
    const double ubar = std::min(sigma, 1.0 / 3.0);
    const double u_end = orbit.samples.back().u;
    CHECK(std::fabs(u_end - ubar) <= std::sqrt(3.0 * sigma * 1e-9) * (1.0 + ubar));
  }
}

TEST_CASE("orbit endpoint approaches ubar as s_min decreases") {
  const double sigma = 0.2;
  double prev_gap = 1.0;
  for (double s_min : {1e-4, 1e-6, 1e-8}) {
    const Orbit orbit = integrate_orbit(sigma, s_min, 1e-10);
    const double gap = sigma - orbit.samples.back().u;
    CHECK(gap > 0.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("resolution independence of the deep endpoint") {
  const Orbit fine = integrate_orbit(1.0 / 3.0, 1e-9, 5e-11);
  const Orbit coarse = integrate_orbit(1.0 / 3.0, 1e-9, 1e-10);
  CHECK(std::fabs(fine.samples.back().u - coarse.samples.back().u) < 10.0 * 5e-11);
}

TEST_CASE("sampled derivative matches du/dS along the orbit") {
  // The attainable agreement is limited by the sample spacing: du between
  // neighbors shrinks with S while the value precision is fixed, so the
  // check runs on the well-conditioned upper decades with dense emission.
  OrbitConfig cfg;
  cfg.s_min = 1e-2;
  cfg.rel_tol = 1e-12;
  cfg.points_per_decade = 20000;
  const Orbit orbit = integrate_orbit(0.1, cfg);
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> pick(1, orbit.samples.size() - 2);
  const double dtau = std::log(10.0) / cfg.points_per_decade;
  for (int k = 0; k < 100; ++k) {
    const std::size_t i = pick(rng);
    const auto& [S, u] = orbit.samples[i];
    const double fd_tau =
        (orbit.samples[i + 1].u - orbit.samples[i - 1].u) / (-2.0 * dtau);
    const double fd = fd_tau / S;
    CHECK(std::fabs(fd - du_dS(S, u, 0.1)) <= 1e-6 * std::fabs(du_dS(S, u, 0.1)));
  }
}

TEST_CASE("exploratory regime and guards") {
  const Orbit orbit = integrate_orbit(0.4, 1e-9, 1e-10);
  CHECK(orbit.exploratory);
  CHECK(orbit.samples.back().u < 1.0 / 3.0);
  CHECK(orbit.samples.back().u > 0.33);

  CHECK_THROWS_AS(integrate_orbit(1e-5, 1e-9, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(integrate_orbit(1.0, 1e-9, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(integrate_orbit(0.2, 2.0, 1e-10), std::invalid_argument);
}

TEST_CASE("speed along the orbit and its limits") {
  const Orbit orbit = integrate_orbit(1.0 / 3.0, 1e-9, 1e-10);
  const auto s = speed_along_orbit(orbit);
  CHECK(s.front() == Approx(1.0 / 3.0).epsilon(1e-12));  // s(1) = sigma
  CHECK(*std::max_element(s.begin(), s.end()) < 1.0);
  CHECK(classify_limit_speed(1.0 / 3.0, orbit) == SpeedClass::luminal);

  for (double sigma : {0.05, 0.2}) {
    const Orbit o = integrate_orbit(sigma, 1e-9, 1e-10);
    const auto sp = speed_along_orbit(o);
    CHECK(*std::max_element(sp.begin(), sp.end()) <= std::sqrt(3.0 * sigma) + 1e-9);
    CHECK(classify_limit_speed(sigma, o) == SpeedClass::zero);
  }

  const Orbit div = integrate_orbit(0.4, 1e-9, 1e-10);
  const auto sd = speed_along_orbit(div);
  CHECK(*std::max_element(sd.begin(), sd.end()) > 1.0);
  CHECK(classify_limit_speed(0.4, div) == SpeedClass::divergent);

  const Orbit shallow = integrate_orbit(0.2, 1e-6, 1e-10);
  CHECK_THROWS_AS(classify_limit_speed(0.2, shallow), std::invalid_argument);
}

TEST_CASE("Big-Bang asymptotic rate at sigma = 1/3") {
  const Orbit orbit = integrate_orbit(1.0 / 3.0, 1e-9, 1e-10);
  const double m = fit_m_star(orbit);
  CHECK(std::fabs(m - 4.0 / 3.0) < 0.02 * 4.0 / 3.0);

  // u(1e-8) within 2% of the asymptotic correction term
  for (const auto& pt : orbit.samples) {
    if (std::fabs(pt.S - 1e-8) < 1e-10) {
      const double corr = 1.0 / 3.0 - pt.u;
      CHECK(std::fabs(corr - 4.0 / 3.0 * 1e-4) < 0.02 * (4.0 / 3.0 * 1e-4));
    }
  }

  CHECK_THROWS_AS(fit_m_star(integrate_orbit(0.2, 1e-9, 1e-10)), std::invalid_argument);
}

TEST_CASE("fit recovers exact synthetic slopes") {
  Orbit synth;
  synth.sigma = 1.0 / 3.0;
  for (int i = 0; i <= 200; ++i) {
    const double S = std::pow(10.0, -9.0 + 4.0 * i / 200.0);
    synth.samples.push_back({S, 1.0 / 3.0 - 4.0 / 3.0 * std::sqrt(S)});
  }
  std::reverse(synth.samples.begin(), synth.samples.end());
  CHECK(fit_m_star(synth) == Approx(4.0 / 3.0).epsilon(1e-12));

  for (auto& pt : synth.samples) pt.u = 1.0 / 3.0 - std::sqrt(pt.S);
  CHECK(fit_m_star(synth) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("invariant regions and the boundary flux inequality") {
  const Orbit orbit = integrate_orbit(0.2, 1e-9, 1e-10);
  const InvariantRegionReport rep = verify_invariant_regions(orbit);
  CHECK(std::all_of(rep.in_R.begin(), rep.in_R.end(), [](bool b) { return b; }));
  CHECK(std::all_of(rep.above_Q.begin(), rep.above_Q.end(), [](bool b) { return b; }));
  CHECK(rep.flux_ok);

  // an over-sized parabola is not invariant: the flux check must fail
  const InvariantRegionReport bad = verify_invariant_regions(orbit, 10.0 / (3.0 * 0.2));
  CHECK_FALSE(bad.flux_ok);

  CHECK_THROWS_AS(verify_invariant_regions(integrate_orbit(0.4, 1e-9, 1e-10)),
                  std::invalid_argument);
}

TEST_CASE("analytic Jacobian of the integrator right-hand side") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double sigma = 0.05 + 0.5 * uni(rng);
    const double tau = -12.0 * uni(rng);
    const double u = 0.9 * std::min(sigma, 1.0 / 3.0) * uni(rng);
    const double h = 1e-7 * (1.0 + std::fabs(u));
    const double fd = (detail::du_dtau(tau, u + h, sigma) - detail::du_dtau(tau, u - h, sigma)) /
                      (2.0 * h);
    const double an = detail::du_dtau_jac(tau, u, sigma);
    CHECK(std::fabs(fd - an) <= 1e-5 * std::max(1.0, std::fabs(an)));
  }
}
