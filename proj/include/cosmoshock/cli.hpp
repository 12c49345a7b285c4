#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cosmoshock/estimates.hpp"
#include "cosmoshock/io.hpp"
#include "cosmoshock/phase_plane.hpp"
#include "cosmoshock/reconstruction.hpp"
#include "cosmoshock/verify.hpp"

namespace cosmoshock::cli {

struct RunConfig {
  double sigma = 1.0 / 3.0;
  double h0 = 1.0;
  double s_min = 1e-9;
  double rel_tol = 1e-10;
  std::string b_variant = "dimensional";
  double horizon_eps = 1e-6;
  std::string out;
  std::string format = "csv";
  int points_per_decade = 20;
};

namespace detail {

inline std::string sibling_json_path(const std::string& out) {
  const auto dot = out.rfind('.');
  const auto slash = out.rfind('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    return out.substr(0, dot) + ".json";
  return out + ".summary.json";
}

inline void write_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  os << body;
}

/// Analytic zero-pressure table: the OS interface at constant comoving
/// radius r0 = r_* = 1, emitted on the same S-grid as an orbit run.
inline ShockSolution os_solution_table(const RunConfig& cfg) {
  ShockSolution sol;
  sol.sigma = 0.0;
  sol.h0 = cfg.h0;
  sol.b_variant = b_variant_from_name(cfg.b_variant).value();
  const double t0 = 2.0 / (3.0 * cfg.h0);
  const double rho0 = 4.0 / (3.0 * kappa * t0 * t0);
  const double dtau = std::log(10.0) / cfg.points_per_decade;
  std::vector<double> taus;
  for (double tau = std::log(cfg.s_min); tau < -0.5 * dtau; tau += dtau) taus.push_back(tau);
  taus.push_back(0.0);
  for (double tau : taus) {
    ShockSolutionRow w;
    w.S = std::exp(tau);
    w.N = 1.0 / w.S;
    w.r = 1.0;
    const double R = std::pow(cfg.h0 * std::sqrt(w.S), 2.0);  // (H0 r sqrt(S))^{2/(1+3*0)}
    w.rho = rho0 * std::pow(R, -3.0);
    w.t = time_of_density(w.rho, 0.0);
    w.rbar = R * w.r;
    w.entropy_ok = w.S < 1.0;  // E(0) = 1; the contact case sits on the boundary region
    w.invariant_ok = w.S <= 1.0;
    sol.rows.push_back(w);
  }
  std::vector<BSample> grid;
  std::vector<std::size_t> rows_idx;
  for (std::size_t k = sol.rows.size(); k-- > 0;) {
    if (sol.rows[k].N > 1.0 + cfg.horizon_eps) {
      grid.push_back({sol.rows[k].N, sol.rows[k].rbar, 0.0});
      rows_idx.push_back(k);
    }
  }
  if (!grid.empty()) {
    const auto logB = log_metric_B(grid, 0.0, sol.b_variant, cfg.horizon_eps);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      auto& w = sol.rows[rows_idx[j]];
      w.log_B = logB[j];
      if (std::fabs(logB[j]) < 700.0) {
        w.B = std::exp(logB[j]);
        w.B_valid = true;
      }
    }
  }
  return sol;
}

inline nlohmann::json config_json(const RunConfig& cfg) {
  return {{"sigma", cfg.sigma},           {"h0", cfg.h0},
          {"smin", cfg.s_min},            {"rel_tol", cfg.rel_tol},
          {"b_variant", cfg.b_variant},   {"horizon_eps", cfg.horizon_eps},
          {"points_per_decade", cfg.points_per_decade}};
}

inline int cmd_run(const RunConfig& cfg) {
  const auto variant = b_variant_from_name(cfg.b_variant);
  if (!variant) {
    std::cerr << "error: unknown --b-variant '" << cfg.b_variant << "'\n";
    return 1;
  }
  nlohmann::json summary{{"sigma", cfg.sigma}, {"h0", cfg.h0}, {"warnings", nlohmann::json::array()}};
  summary["config"] = config_json(cfg);
  ShockSolution sol;

  if (cfg.sigma == 0.0) {
    sol = os_solution_table(cfg);
    summary["speed_class"] = "zero";
    summary["report"] = report_json(os_report());
  } else {
    OrbitConfig ocfg;
    ocfg.s_min = cfg.s_min;
    ocfg.rel_tol = cfg.rel_tol;
    ocfg.points_per_decade = cfg.points_per_decade;
    const Orbit orbit = integrate_orbit(cfg.sigma, ocfg);
    for (const auto& d : orbit.defects) summary["warnings"].push_back("orbit: " + d);
    sol = assemble(orbit, cfg.h0, *variant, cfg.horizon_eps);
    if (orbit.exploratory) {
      summary["exploratory"] = true;
      summary["warnings"].push_back(
          "sigma > 1/3: entropy/invariant-region certification disabled");
    }
    if (orbit.samples.back().S <= 1e-8) {
      summary["speed_class"] = to_string(classify_limit_speed(cfg.sigma, orbit));
    } else {
      summary["speed_class"] = to_string(SpeedClass::inconclusive);
      summary["warnings"].push_back(
          "orbit too shallow to classify the Big-Bang limit speed (needs --smin <= 1e-8)");
    }
    if (std::fabs(cfg.sigma - 1.0 / 3.0) < 1e-6 && orbit.samples.back().S <= 1e-8)
      summary["m_star"] = fit_m_star(orbit, 1e-6);
    if (cfg.sigma <= 1.0 / 3.0) {
      const RTable rt = integrate_r(orbit);
      summary["report"] = report_json(numeric_report(cfg.sigma, rt.S, rt.r));
    } else {
      summary["warnings"].push_back("sigma > 1/3: observability report not defined");
    }
  }

  std::ostringstream table;
  write_solution_csv(table, sol);
  const std::string out = cfg.out.empty() ? "run" : cfg.out;
  if (cfg.format == "csv") {
    const std::string csv_path = out.ends_with(".csv") ? out : out + ".csv";
    write_file(csv_path, table.str());
    write_file(sibling_json_path(csv_path), summary.dump(2) + "\n");
    std::cout << csv_path << "\n" << sibling_json_path(csv_path) << "\n";
  } else if (cfg.format == "json") {
    nlohmann::json doc = summary;
    doc["rows"] = nlohmann::json::array();
    for (const auto& w : sol.rows) doc["rows"].push_back(row_json(w));
    const std::string json_path = out.ends_with(".json") ? out : out + ".json";
    write_file(json_path, doc.dump(2) + "\n");
    std::cout << json_path << "\n";
  } else {
    std::cerr << "error: unknown --format '" << cfg.format << "'\n";
    return 1;
  }
  return 0;
}

inline int cmd_sweep(std::vector<double> sigmas, const RunConfig& cfg) {
  // deterministic output order, duplicates dropped with a warning
  std::sort(sigmas.begin(), sigmas.end());
  std::vector<double> uniq;
  for (double s : sigmas) {
    if (!uniq.empty() && s == uniq.back()) {
      std::cerr << "warning: duplicate sigma " << fmt17(s) << " ignored\n";
      continue;
    }
    uniq.push_back(s);
  }
  std::ostringstream csv;
  csv << "sigma,H0_r_star,S0,sqrtN0,sqrtN0_lower,sqrtN0_upper,"
         "tcrit_ratio,tcrit_ratio_lower,tcrit_ratio_upper,error\n";
  nlohmann::json rows = nlohmann::json::array();
  for (double sigma : uniq) {
    std::string error;
    ObservabilityReport rep;
    try {
      if (sigma == 0.0) {
        rep = os_report();
      } else {
        OrbitConfig ocfg;
        ocfg.s_min = cfg.s_min;
        ocfg.rel_tol = cfg.rel_tol;
        ocfg.points_per_decade = cfg.points_per_decade;
        const Orbit orbit = integrate_orbit(sigma, ocfg);
        const RTable rt = integrate_r(orbit);
        rep = numeric_report(sigma, rt.S, rt.r);
      }
    } catch (const std::exception& e) {
      error = e.what();
    }
    if (error.empty()) {
      csv << fmt17(rep.sigma) << ',' << fmt17(rep.H0_r_star) << ',' << fmt17(rep.S0) << ','
          << fmt17(rep.sqrtN0_numeric) << ',' << fmt17(rep.sqrtN0_lower) << ','
          << fmt17(rep.sqrtN0_upper) << ',' << fmt17(rep.tcrit_ratio_numeric) << ','
          << fmt17(rep.tcrit_ratio_lower) << ',' << fmt17(rep.tcrit_ratio_upper) << ",\n";
      auto j = report_json(rep);
      j["error"] = nullptr;
      rows.push_back(j);
    } else {
      csv << fmt17(sigma) << ",,,,,,,,," << '"' << error << '"' << "\n";
      rows.push_back({{"sigma", sigma}, {"error", error}});
    }
  }
  if (cfg.format == "json") {
    const nlohmann::json doc{{"config", config_json(cfg)}, {"reports", rows}};
    if (cfg.out.empty()) {
      std::cout << doc.dump(2) << "\n";
    } else {
      write_file(cfg.out, doc.dump(2) + "\n");
      std::cout << cfg.out << "\n";
    }
  } else {
    if (cfg.out.empty()) {
      std::cout << csv.str();
    } else {
      write_file(cfg.out, csv.str());
      std::cout << cfg.out << "\n";
    }
  }
  return 0;
}

inline int cmd_verify(const VerifyOptions& opts) {
  const auto t_start = std::chrono::steady_clock::now();
  const auto results = run_verify(opts);
  if (results.empty()) {
    std::cerr << "error: no battery named '" << opts.only << "'\n";
    return 1;
  }
  bool all_pass = true;
  std::string first_fail;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name;
    if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
    std::cout << "\n";
    if (!r.pass && first_fail.empty()) first_fail = r.name;
    all_pass = all_pass && r.pass;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  std::cout << (all_pass ? "all batteries passed" : "FAILED: " + first_fail) << "  ["
            << results.size() << " batteries, " << fmt17(secs).substr(0, 5) << " s]\n";
  return all_pass ? 0 : 1;
}

}  // namespace detail

/// Entry point shared by the binary and the tests.
inline int run(int argc, const char* const* argv) {
  CLI::App app{"Exact FRW-TOV shock-wave cosmologies inside the black hole"};
  app.require_subcommand(1);

  RunConfig cfg;
  VerifyOptions vopts;
  std::string sigma_list;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--h0", cfg.h0, "Hubble constant at present time (geometric units)")
        ->capture_default_str();
    sub->add_option("--smin", cfg.s_min, "deepest S = 1/N to integrate to")
        ->capture_default_str();
    sub->add_option("--rel-tol", cfg.rel_tol, "orbit integrator relative tolerance")
        ->capture_default_str();
    sub->add_option("--b-variant", cfg.b_variant,
                    "B-equation integrand: dimensional | paper-literal")
        ->capture_default_str();
    sub->add_option("--horizon-eps", cfg.horizon_eps, "guard band above N = 1 for B")
        ->capture_default_str();
    sub->add_option("--out", cfg.out, "output path (table; summary lands next to it)");
    sub->add_option("--format", cfg.format, "csv | json")->capture_default_str();
    sub->add_option("--points-per-decade", cfg.points_per_decade,
                    "sample density of the emitted table")
        ->capture_default_str();
  };

  CLI::App* c_run = app.add_subcommand("run", "integrate one sigma and write table + summary");
  c_run->add_option("--sigma", cfg.sigma, "equation-of-state ratio p/rho (0 = OS solution)")
      ->capture_default_str();
  add_common(c_run);

  CLI::App* c_sweep = app.add_subcommand("sweep", "observability report over a sigma list");
  c_sweep->add_option("--sigma", sigma_list, "comma-separated sigma values")->required();
  add_common(c_sweep);

  CLI::App* c_verify = app.add_subcommand("verify", "run the property/invariant batteries");
  c_verify->add_option("--only", vopts.only, "run a single battery by name");
  c_verify->add_option("--smin", vopts.s_min, "deepest S for orbit batteries")
      ->capture_default_str();
  c_verify->add_option("--rel-tol", vopts.rel_tol, "orbit integrator relative tolerance")
      ->capture_default_str();
  c_verify->add_option("--b-variant", cfg.b_variant,
                       "B-equation integrand: dimensional | paper-literal")
      ->capture_default_str();
  c_verify->add_option("--horizon-eps", vopts.horizon_eps, "guard band above N = 1 for B")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (c_run->parsed()) return detail::cmd_run(cfg);
    if (c_sweep->parsed()) {
      std::vector<double> sigmas;
      std::stringstream ss(sigma_list);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) sigmas.push_back(std::stod(tok));
      }
      for (double s : sigmas)
        if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("sweep sigma outside [0, 1)");
      return detail::cmd_sweep(sigmas, cfg);
    }
    if (c_verify->parsed()) {
      if (auto v = b_variant_from_name(cfg.b_variant)) vopts.b_variant = *v;
      return detail::cmd_verify(vopts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace cosmoshock::cli
