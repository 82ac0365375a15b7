#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atomtf/config.hpp"
#include "atomtf/errors.hpp"
#include "atomtf/table.hpp"

#include <sstream>

using namespace atomtf;

TEST_CASE("csv emission") {
  Table t;
  t.columns = {"a", "b"};
  SUBCASE("empty table is header-only") {
    std::ostringstream os;
    emit_table(t, TableFormat::csv, os);
    CHECK(os.str() == "a,b\n");
  }
  SUBCASE("rows and summary") {
    t.add_row({1.0, 0.5});
    t.summary.emplace_back("mass", 1.0 / 3.0);
    std::ostringstream os;
    emit_table(t, TableFormat::csv, os);
    CHECK(os.str() == "a,b\n1,0.5\n# mass = 0.333333333333333\n");
  }
  SUBCASE("row width is validated") {
    CHECK_THROWS_AS(t.add_row({1.0}), parameter_error);
  }
}

TEST_CASE("json emission is stable and repeatable") {
  Table t;
  t.columns = {"x", "y"};
  t.add_row({2.0, -1.25e-7});
  t.summary.emplace_back("slope", -3.999999999999991);
  std::ostringstream a, b;
  emit_table(t, TableFormat::json, a);
  emit_table(t, TableFormat::json, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("\"columns\": [\"x\", \"y\"]") != std::string::npos);
  CHECK(a.str().find("-3.99999999999999") != std::string::npos);
}

TEST_CASE("number formatting uses 15 significant digits") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_number(-2.5e-17) == "-2.5e-17");
}

TEST_CASE("config round-trips losslessly") {
  RunConfig c;
  c.Z_values = {1.0, 50.0};
  c.N_values = {1.5};
  c.kappa_values = {10.0};
  c.scan_step = 0.125;
  c.grid_n = 2222;
  c.flow.max_iter = 777;
  c.out_path = "out.csv";
  c.format = "json";
  c.seed = 42;
  const RunConfig back = RunConfig::from_json_text(c.to_json_text());
  CHECK(back == c);
}

TEST_CASE("strict parsing rejects unknown keys by name") {
  CHECK_THROWS_WITH_AS(RunConfig::from_json_text("{\"zz\": 1}"),
                       doctest::Contains("zz"), config_error);
  CHECK_THROWS_WITH_AS(RunConfig::from_json_text("{\"grid\": {\"rmin\": 1}}"),
                       doctest::Contains("rmin"), config_error);
  CHECK_THROWS_AS(RunConfig::from_json_text("not json"), config_error);
  CHECK_THROWS_AS(RunConfig::from_json_text("{\"format\": \"xml\"}"), config_error);
}

TEST_CASE("parse_format") {
  CHECK(parse_format("csv") == TableFormat::csv);
  CHECK(parse_format("json") == TableFormat::json);
  CHECK_THROWS_AS(parse_format("yaml"), config_error);
}
