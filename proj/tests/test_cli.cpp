#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string(ATOMTF_BIN) + " " + args + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

} // namespace

TEST_CASE("tf command writes the documented CSV with a mass summary") {
  const std::string out = "/tmp/atomtf_tf_z1.csv";
  REQUIRE(run("tf --Z 1 --out " + out + " --format csv") == 0);
  const std::string text = slurp(out);
  CHECK(text.rfind("Z,r,rho_tf,phi_tf\n", 0) == 0);
  const auto pos = text.find("# mass_Z1 = ");
  REQUIRE(pos != std::string::npos);
  const double mass = std::strtod(text.c_str() + pos + 12, nullptr);
  CHECK(std::abs(mass - 1.0) <= 1e-6);
}

TEST_CASE("repeated runs are byte-identical") {
  const std::string a = "/tmp/atomtf_det_a.csv", b = "/tmp/atomtf_det_b.csv";
  REQUIRE(run("tf --Z 2 --out " + a) == 0);
  REQUIRE(run("tf --Z 2 --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());
}

TEST_CASE("verify exits zero on a fresh build and is deterministic") {
  const std::string a = "/tmp/atomtf_verify_a.txt", b = "/tmp/atomtf_verify_b.txt";
  REQUIRE(run("verify --out " + a) == 0);
  REQUIRE(run("verify --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find("all checks passed") != std::string::npos);
}

TEST_CASE("config file drives the run and bad configs exit 2") {
  const std::string cfg = "/tmp/atomtf_cfg.json";
  {
    std::ofstream os(cfg);
    os << "{\"Z\": [1.0], \"grid\": {\"n\": 800}, \"format\": \"json\"}\n";
  }
  const std::string out = "/tmp/atomtf_cfg_out.json";
  REQUIRE(run("tf --config " + cfg + " --out " + out) == 0);
  CHECK(slurp(out).find("\"columns\"") != std::string::npos);

  {
    std::ofstream os(cfg);
    os << "{\"zed\": [1.0]}\n";
  }
  CHECK(run("tf --config " + cfg) == 2);
  CHECK(run("tf --config /tmp/definitely_missing.json") == 2);
}

TEST_CASE("flag overrides beat config values") {
  const std::string cfg = "/tmp/atomtf_cfg2.json";
  {
    std::ofstream os(cfg);
    os << "{\"Z\": [1.0], \"format\": \"json\", \"grid\": {\"n\": 800}}\n";
  }
  const std::string out = "/tmp/atomtf_cfg2_out.csv";
  REQUIRE(run("tf --config " + cfg + " --format csv --out " + out) == 0);
  CHECK(slurp(out).rfind("Z,r", 0) == 0);
}

TEST_CASE("sweep results do not depend on the worker count") {
  const std::string a = "/tmp/atomtf_jobs1.csv", b = "/tmp/atomtf_jobs2.csv";
  REQUIRE(run("tf --Z 1 --Z 2 --Z 3 --jobs 1 --out " + a) == 0);
  REQUIRE(run("tf --Z 1 --Z 2 --Z 3 --jobs 3 --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("screen command emits the fitted slope in JSON") {
  const std::string cfg = "/tmp/atomtf_screen_cfg.json";
  {
    std::ofstream os(cfg);
    os << "{\"Z\": [50.0], \"grid\": {\"n\": 2500}, "
          "\"flow\": {\"max_iter\": 6000, \"tol_residual\": 1e-6}}\n";
  }
  const std::string out = "/tmp/atomtf_screen.json";
  REQUIRE(run("screen --config " + cfg + " --format json --out " + out) == 0);
  const std::string text = slurp(out);
  const auto pos = text.find("\"fitted_slope\": ");
  REQUIRE(pos != std::string::npos);
  const double slope = std::strtod(text.c_str() + pos + 16, nullptr);
  CHECK(slope > -4.0);
}

TEST_CASE("radius command tabulates the kappa sweep") {
  const std::string cfg = "/tmp/atomtf_radius_cfg.json";
  {
    std::ofstream os(cfg);
    os << "{\"Z\": [5.0], \"grid\": {\"n\": 2000}, "
          "\"flow\": {\"max_iter\": 4000, \"tol_residual\": 1e-6}}\n";
  }
  const std::string out = "/tmp/atomtf_radius.csv";
  REQUIRE(run("radius --config " + cfg + " --kappa 0.5 --kappa 2.0 --out " + out) == 0);
  const std::string text = slurp(out);
  CHECK(text.rfind("Z,N,kappa,R,ratio\n", 0) == 0);
  // two data rows, R decreasing in kappa
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  double r1 = 0, r2 = 0;
  std::getline(is, line);
  std::sscanf(line.c_str(), "%*f,%*f,%*f,%lf", &r1);
  std::getline(is, line);
  std::sscanf(line.c_str(), "%*f,%*f,%*f,%lf", &r2);
  CHECK(r1 > r2);
}

TEST_CASE("ionize command brackets a small nucleus") {
  const std::string cfg = "/tmp/atomtf_ionize_cfg.json";
  {
    std::ofstream os(cfg);
    os << "{\"Z\": [1.0], \"scan_step\": 2.0, \"grid\": {\"n\": 1500}}\n";
  }
  const std::string out = "/tmp/atomtf_ionize.csv";
  REQUIRE(run("ionize --config " + cfg + " --out " + out) == 0);
  const std::string text = slurp(out);
  CHECK(text.rfind("Z,Nc,excess,N_unbound,bracket_ok,scan_failed\n", 0) == 0);
  double Z = 0, Nc = 0;
  std::sscanf(text.c_str() + text.find('\n') + 1, "%lf,%lf", &Z, &Nc);
  CHECK(Nc >= Z);
}

TEST_CASE("drop command reports thresholds") {
  const std::string out = "/tmp/atomtf_drop.csv";
  REQUIRE(run("drop --Z 0 --out " + out) == 0);
  const std::string text = slurp(out);
  CHECK(text.rfind("Z,N_star,best_split\n", 0) == 0);
  const double nstar = std::strtod(text.c_str() + text.find('\n') + 3, nullptr);
  CHECK(std::abs(nstar - 3.512) < 0.01);
}
