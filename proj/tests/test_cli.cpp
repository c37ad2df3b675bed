#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mchn/config.hpp"
#include "mchn/io.hpp"
#include "mchn/scenario.hpp"

using namespace mchn;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs a bundled config with output redirected to a scratch directory.
ScenarioOutcome run_config(const std::string& name, const fs::path& dir) {
  fs::create_directories(dir);
  ::setenv(kOutputDirEnv, dir.c_str(), 1);
  auto out = run_scenario(Config::load(std::string(MCHN_CONFIG_DIR) + "/" + name));
  ::unsetenv(kOutputDirEnv);
  return out;
}

fs::path scratch(const std::string& leaf) { return fs::temp_directory_path() / "mchn_test_cli" / leaf; }

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
  Json j = {{"a", 0.1}, {"b", std::nan("")}, {"c", {1.0, 2.0}}};
  const auto s = dump_json(j);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.find("null") != std::string::npos);
}

TEST_CASE("CSV writer and reader") {
  const auto dir = scratch("csv");
  fs::create_directories(dir);
  const auto path = (dir / "t.csv").string();
  {
    CsvWriter w(path, "demo", {"t", "x"});
    w.row({0.0, 1.0 / 3.0});
    w.row({0.5, -2.0});
    CHECK_THROWS(w.row({1.0}));
  }
  const auto t = read_csv(path);
  CHECK(t.schema == "mchn.demo v1");
  CHECK(t.columns == std::vector<std::string>{"t", "x"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == 1.0 / 3.0);
}

TEST_CASE("config parsing") {
  const auto c = Config::parse("[model]\nk1 = 1\nk2 = 0.5 ; trailing comment is not stripped by the parser\n"
                               "[holder]\ns = 3, 2.75\n[output]\nsave = yes\n");
  CHECK(c.get_double("model.k1") == 1.0);
  CHECK_THROWS_AS(c.get_double("model.k2"), ConfigError);
  CHECK(c.get_list("holder.s") == std::vector<double>{3.0, 2.75});
  CHECK(c.get_bool("output.save", false));
  CHECK(c.get_double("model.k3", 7.0) == 7.0);
  CHECK_THROWS_AS(c.get_string("model.k3"), ConfigError);
  CHECK_THROWS_AS(c.get_choice("model.k1", {"a", "b"}, "a"), ConfigError);
  CHECK_THROWS_AS(c.reject_unknown({"model.k1"}), ConfigError);
  CHECK_THROWS_AS(Config::parse("k1 = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[a]\nx = 1\n[a]\ny = 2\n"), ConfigError);
  try {
    Config::parse("[model]\nk1 = one\n").get_double("model.k1");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("model.k1") != std::string::npos);
  }
}

TEST_CASE("scenario kinds") {
  const auto& k = scenario_kinds();
  CHECK(k.size() == 7);
  CHECK_THROWS_AS(run_scenario(Config::parse("[scenario]\nkind = nope\n")), ConfigError);
  CHECK_THROWS_AS(run_scenario(Config::parse("[scenario]\nkind = reduce-check\n[model]\nk9 = 1\n")), ConfigError);
}

TEST_CASE("single peakon scenario") {
  const auto dir = scratch("peakon");
  const auto out = run_config("peakon_single.ini", dir);
  CHECK(out.exit_code == 0);
  const auto t = read_csv((dir / "peakon_single_trajectory.csv").string());
  REQUIRE(t.columns.size() == 4);
  CHECK(t.rows.size() == 7);  // t = 0, 0.5, ..., 3
  const auto& last = t.rows.back();
  CHECK(last[0] == 3.0);
  CHECK(std::abs(last[2] - t.rows.front()[2] - 2.0) < 1e-9);
}

TEST_CASE("case-4 certificate scenario") {
  const auto dir = scratch("cert");
  const auto out = run_config("breaking_case4_example.ini", dir);
  CHECK(out.exit_code == 0);
  const auto j = Json::parse(slurp((dir / "breaking_case4_example_certificate.json").string()));
  const auto& c = j["certificates"][0];
  CHECK(c["satisfied"].get<bool>());
  CHECK(c["T_upper"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("reduction scenario") {
  const auto dir = scratch("reduce");
  const auto out = run_config("reduce_check.ini", dir);
  CHECK(out.exit_code == 0);
  CHECK(fs::exists(dir / "reduce_check_reductions.json"));
}

TEST_CASE("identical configs give identical bytes") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  run_config("periodic_peakons.ini", a);
  run_config("periodic_peakons.ini", b);
  for (const auto& e : fs::directory_iterator(a)) {
    CAPTURE(e.path().filename().string());
    CHECK(slurp(e.path().string()) == slurp((b / e.path().filename()).string()));
  }
}

TEST_CASE("worker count does not change results") {
  const auto a = scratch("jobs_1"), b = scratch("jobs_3");
  const auto cfg = Config::load(std::string(MCHN_CONFIG_DIR) + "/characteristics.ini");
  for (const auto& [dir, jobs] : {std::pair{a, 1u}, std::pair{b, 3u}}) {
    fs::create_directories(dir);
    ::setenv(kOutputDirEnv, dir.c_str(), 1);
    run_scenario(cfg, {jobs});
    ::unsetenv(kOutputDirEnv);
  }
  for (const auto& e : fs::directory_iterator(a)) {
    CAPTURE(e.path().filename().string());
    CHECK(slurp(e.path().string()) == slurp((b / e.path().filename()).string()));
  }
}
