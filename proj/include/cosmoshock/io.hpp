#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "cosmoshock/estimates.hpp"
#include "cosmoshock/phase_plane.hpp"
#include "cosmoshock/reconstruction.hpp"

namespace cosmoshock {

/// Shortest exact decimal form of a binary64 value (17 significant digits
/// guarantee an exact round trip).
inline std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline constexpr const char* csv_header =
    "S,N,u,v,rbar,r,t,rho,p,pbar,rhobar,s,B,B_valid,entropy_ok,invariant_ok";

inline void write_solution_csv(std::ostream& os, const ShockSolution& sol) {
  os << csv_header << "\n";
  for (const auto& w : sol.rows) {
    os << fmt17(w.S) << ',' << fmt17(w.N) << ',' << fmt17(w.u) << ',' << fmt17(w.v) << ','
       << fmt17(w.rbar) << ',' << fmt17(w.r) << ',' << fmt17(w.t) << ',' << fmt17(w.rho) << ','
       << fmt17(w.p) << ',' << fmt17(w.pbar) << ',' << fmt17(w.rhobar) << ',' << fmt17(w.s)
       << ',' << (w.B_valid ? fmt17(w.B) : "nan") << ',' << (w.B_valid ? 1 : 0) << ','
       << (w.entropy_ok ? 1 : 0) << ',' << (w.invariant_ok ? 1 : 0) << "\n";
  }
}

inline nlohmann::json report_json(const ObservabilityReport& rep) {
  return {{"sigma", rep.sigma},
          {"H0_r_star", rep.H0_r_star},
          {"S0", rep.S0},
          {"sqrtN0_numeric", rep.sqrtN0_numeric},
          {"sqrtN0_lower", rep.sqrtN0_lower},
          {"sqrtN0_upper", rep.sqrtN0_upper},
          {"tcrit_ratio_numeric", rep.tcrit_ratio_numeric},
          {"tcrit_ratio_lower", rep.tcrit_ratio_lower},
          {"tcrit_ratio_upper", rep.tcrit_ratio_upper}};
}

inline nlohmann::json row_json(const ShockSolutionRow& w) {
  nlohmann::json j{{"S", w.S},     {"N", w.N},       {"u", w.u},
                   {"v", w.v},     {"rbar", w.rbar}, {"r", w.r},
                   {"t", w.t},     {"rho", w.rho},   {"p", w.p},
                   {"pbar", w.pbar}, {"rhobar", w.rhobar}, {"s", w.s},
                   {"B_valid", w.B_valid}, {"entropy_ok", w.entropy_ok},
                   {"invariant_ok", w.invariant_ok}};
  if (w.B_valid) j["B"] = w.B;
  return j;
}

inline const char* b_variant_name(BVariant v) {
  return v == BVariant::dimensional ? "dimensional" : "paper-literal";
}

inline std::optional<BVariant> b_variant_from_name(const std::string& name) {
  if (name == "dimensional") return BVariant::dimensional;
  if (name == "paper-literal") return BVariant::paper_literal;
  return std::nullopt;
}

}  // namespace cosmoshock
