#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cosmoshock/cli.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(std::initializer_list<std::string> args) {
  std::vector<const char*> argv{"cosmoshock"};
  std::vector<std::string> hold(args);
  for (const auto& a : hold) argv.push_back(a.c_str());
  return cosmoshock::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cosmoshock_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};

}  // namespace

TEST_CASE("run writes a table and a summary") {
  TempDir tmp;
  const std::string out = (tmp.path / "a.csv").string();
  REQUIRE(run_cli({"run", "--sigma", "0.333333333333333315", "--h0", "1", "--smin", "1e-9",
                   "--out", out}) == 0);

  const std::string csv = slurp(out);
  REQUIRE(csv.rfind("S,N,u,v,rbar,r,t,rho,p,pbar,rhobar,s,B,B_valid,entropy_ok,invariant_ok\n",
                    0) == 0);
  // strictly decreasing N column
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  double prev_n = 1e300;
  int rows = 0;
  while (std::getline(is, line)) {
    const auto c1 = line.find(',');
    const double n = std::stod(line.substr(c1 + 1));
    CHECK(n < prev_n);
    prev_n = n;
    ++rows;
  }
  CHECK(rows > 100);

  const auto summary = nlohmann::json::parse(slurp(tmp.path / "a.json"));
  CHECK(summary["speed_class"] == "luminal");
  CHECK(std::fabs(summary["m_star"].get<double>() - 4.0 / 3.0) < 0.03);
  CHECK(summary.contains("report"));
  CHECK(summary["report"]["tcrit_ratio_numeric"].get<double>() > 1.8);
  CHECK(summary["warnings"].empty());
}

TEST_CASE("run accepts a six-digit sigma near 1/3 and still fits m*") {
  TempDir tmp;
  const std::string out = (tmp.path / "six.csv").string();
  REQUIRE(run_cli({"run", "--sigma", "0.333333", "--h0", "1", "--smin", "1e-9", "--out", out}) ==
          0);
  const auto summary = nlohmann::json::parse(slurp(tmp.path / "six.json"));
  REQUIRE(summary.contains("m_star"));
  CHECK(std::fabs(summary["m_star"].get<double>() - 4.0 / 3.0) < 0.02 * 4.0 / 3.0);
  // sigma = 0.333333 is genuinely below 1/3: its limit speed is zero, but
  // the turnover lies far below S = 1e-9, so the classifier must not call
  // it luminal with confidence
  const std::string cls = summary["speed_class"];
  CHECK((cls == "inconclusive" || cls == "zero"));
}

TEST_CASE("run at sigma = 0 takes the analytic OS path") {
  TempDir tmp;
  const std::string out = (tmp.path / "os.csv").string();
  REQUIRE(run_cli({"run", "--sigma", "0", "--smin", "1e-6", "--out", out}) == 0);
  const auto summary = nlohmann::json::parse(slurp(tmp.path / "os.json"));
  CHECK(summary["report"]["sqrtN0_numeric"] == 2.0);
  CHECK(summary["report"]["tcrit_ratio_numeric"] == 2.0);
  CHECK(summary["speed_class"] == "zero");

  const std::string csv = slurp(out);
  CHECK(csv.find("nan") != std::string::npos);  // near-horizon rows carry no B
}

TEST_CASE("run at sigma = 0.4 reports the divergent exploratory regime") {
  TempDir tmp;
  const std::string out = (tmp.path / "d.csv").string();
  REQUIRE(run_cli({"run", "--sigma", "0.4", "--out", out}) == 0);
  const auto summary = nlohmann::json::parse(slurp(tmp.path / "d.json"));
  CHECK(summary["speed_class"] == "divergent");
  CHECK(summary["exploratory"] == true);
  CHECK_FALSE(summary.contains("m_star"));
  bool flagged = false;
  for (const auto& w : summary["warnings"])
    flagged = flagged || w.get<std::string>().find("certification disabled") != std::string::npos;
  CHECK(flagged);
}

TEST_CASE("identical config produces byte-identical output") {
  TempDir tmp;
  const std::string o1 = (tmp.path / "r1.csv").string();
  const std::string o2 = (tmp.path / "r2.csv").string();
  REQUIRE(run_cli({"run", "--sigma", "0.1", "--smin", "1e-6", "--out", o1}) == 0);
  REQUIRE(run_cli({"run", "--sigma", "0.1", "--smin", "1e-6", "--out", o2}) == 0);
  CHECK(slurp(o1) == slurp(o2));
  CHECK(slurp(tmp.path / "r1.json") == slurp(tmp.path / "r2.json"));
}

TEST_CASE("csv doubles round-trip exactly") {
  TempDir tmp;
  const std::string out = (tmp.path / "rt.csv").string();
  REQUIRE(run_cli({"run", "--sigma", "0.2", "--smin", "1e-6", "--out", out}) == 0);

  // re-assemble the same solution and compare against the parsed file
  cosmoshock::OrbitConfig cfg;
  cfg.s_min = 1e-6;
  const auto orbit = cosmoshock::integrate_orbit(0.2, cfg);
  const auto sol = cosmoshock::assemble(orbit, 1.0);
  std::istringstream is(slurp(out));
  std::string line;
  std::getline(is, line);
  std::size_t i = 0;
  while (std::getline(is, line)) {
    REQUIRE(i < sol.rows.size());
    std::istringstream ls(line);
    std::string tok;
    std::getline(ls, tok, ',');
    CHECK(std::stod(tok) == sol.rows[i].S);  // bitwise equality after %.17g
    std::getline(ls, tok, ',');
    CHECK(std::stod(tok) == sol.rows[i].N);
    std::getline(ls, tok, ',');
    CHECK(std::stod(tok) == sol.rows[i].u);
    ++i;
  }
  CHECK(i == sol.rows.size());
}

TEST_CASE("json format bundles rows with the summary") {
  TempDir tmp;
  const std::string out = (tmp.path / "j.json").string();
  REQUIRE(run_cli({"run", "--sigma", "0.1", "--smin", "1e-6", "--format", "json", "--out",
                   out}) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc.contains("rows"));
  CHECK(doc["rows"].size() > 50);
  CHECK(doc["sigma"] == 0.1);
  CHECK(doc["config"]["b_variant"] == "dimensional");
}

TEST_CASE("sweep emits one report row per sigma, deduplicated and ordered") {
  TempDir tmp;
  const std::string out = (tmp.path / "sweep.csv").string();
  REQUIRE(run_cli({"sweep", "--sigma", "0.1,0.01,0.333333333333333315,0.1", "--smin", "1e-9",
                   "--out", out}) == 0);
  const std::string csv = slurp(out);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line.rfind("sigma,", 0) == 0);
  std::vector<double> sigmas;
  while (std::getline(is, line)) sigmas.push_back(std::stod(line));
  REQUIRE(sigmas.size() == 3);  // duplicate dropped
  CHECK(sigmas[0] == 0.01);
  CHECK(sigmas[1] == 0.1);
}

TEST_CASE("sweep with an empty list writes only the header") {
  TempDir tmp;
  const std::string out = (tmp.path / "empty.csv").string();
  REQUIRE(run_cli({"sweep", "--sigma", ",", "--out", out}) == 0);
  std::istringstream is(slurp(out));
  std::string line;
  int n = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++n;
  CHECK(n == 1);
}

TEST_CASE("sweep records per-sigma failures and continues") {
  TempDir tmp;
  const std::string out = (tmp.path / "err.csv").string();
  // 5e-5 is below the phase-plane guard: the row carries an error field
  REQUIRE(run_cli({"sweep", "--sigma", "5e-5,0.1", "--smin", "1e-6", "--out", out}) == 0);
  const std::string csv = slurp(out);
  CHECK(csv.find("phase-plane guard") != std::string::npos);
  CHECK(csv.find("\n0.1") != std::string::npos);
}

TEST_CASE("verify subcommand: single battery filter and unknown names") {
  CHECK(run_cli({"verify", "--only", "hubble-brackets"}) == 0);
  CHECK(run_cli({"verify", "--only", "no-such-battery"}) == 1);
}

TEST_CASE("library-level fault injection fails the named battery") {
  cosmoshock::VerifyOptions opts;
  opts.only = "b-variant";
  opts.s_min = 1e-6;
  opts.b_variant_log_tol = 0.0;  // the two variants genuinely differ
  const auto results = cosmoshock::run_verify(opts);
  REQUIRE(results.size() == 1);
  CHECK(results[0].name == "b-variant");
  CHECK_FALSE(results[0].pass);

  opts.b_variant_log_tol = 1e30;
  CHECK(cosmoshock::run_verify(opts)[0].pass);
}

TEST_CASE("bad flags exit nonzero with a diagnostic") {
  TempDir tmp;
  CHECK(run_cli({"run", "--sigma", "0.2", "--b-variant", "bogus",
                 "--out", (tmp.path / "x.csv").string()}) == 1);
  CHECK(run_cli({"run", "--sigma", "0.2", "--format", "bogus",
                 "--out", (tmp.path / "y.csv").string()}) == 1);
  CHECK(run_cli({"sweep", "--sigma", "1.5"}) == 1);
}
