#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "critlab/errors.hpp"
#include "critlab/lab.hpp"

using namespace critlab;
using namespace critlab::lab;
using nlohmann::json;

namespace {

ExperimentConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 9);
  ExperimentConfig c;
  c.command = kCommands[pick(rng)];
  c.family = pick(rng) % 2 ? "arnold" : "two_harmonic";
  c.c = u(rng) * 0.3;
  if (pick(rng) % 2) c.theta = u(rng);
  if (pick(rng) % 2) c.target = pick(rng) % 2 ? "golden" : "2,1,(1)";
  c.depth = 1 + pick(rng);
  if (pick(rng) % 2) c.level = pick(rng);
  c.tol = std::ldexp(1.0, -10 - pick(rng) * 4) * (1.0 + 0.5 * u(rng));
  c.precision = static_cast<Precision>(pick(rng) % 3);
  c.out = "out/" + std::to_string(pick(rng));
  c.seed = rng();
  c.side = pick(rng) % 2 ? "left" : "both";
  if (pick(rng) % 2) c.reference_c = 0.2 + 0.01 * u(rng);
  c.eps = {0.01 * (1.5 + u(rng)), 1e-3 * (1.5 + u(rng))};
  c.budget = 1 + pick(rng) * 1000;
  c.escape_im = 3.0 + u(rng);
  if (pick(rng) % 2) c.window = WindowConfig{u(rng), u(rng), 1.0 + u(rng) * 0.5, 2.0 + u(rng)};
  c.resolution = 8 + pick(rng) * 100;
  c.radius_factor = 4.0 + u(rng);
  c.k = pick(rng) - 5;
  c.sign = pick(rng) % 2 ? 1 : -1;
  c.im_max = 3.0 + u(rng);
  c.im_count = 1 + pick(rng);
  c.samples = 1 + static_cast<std::size_t>(pick(rng)) * 100;
  c.inject_fault = pick(rng) % 2;
  return c;
}

}  // namespace

TEST_CASE("config round-trips losslessly (property)") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const ExperimentConfig c = random_config(rng);
    CHECK_NOTHROW(validate(c));
    const ExperimentConfig back = config_from_json(json::parse(config_to_json(c).dump()));
    CHECK(back == c);
    CHECK(config_to_json(back) == config_to_json(c));
  }
}

TEST_CASE("config rejects unknown fields and wrong types") {
  CHECK_THROWS_AS(config_from_json(json{{"command", "rho"}, {"thetta", 0.3}}), ParameterError);
  CHECK_THROWS_AS(config_from_json(json{{"window", {{"center_re", 0.0}, {"zoom", 2}}}}), ParameterError);
  CHECK_THROWS_AS(config_from_json(json{{"depth", "twelve"}}), ParameterError);
  CHECK_THROWS_AS(config_from_json(json{{"precision", "quad"}}), DomainError);
  CHECK_THROWS_AS(config_from_json(json::array()), ParameterError);
  CHECK_NOTHROW(config_from_json(json::object()));
}

TEST_CASE("targets accept strings, decimals and quotient lists") {
  CHECK(config_from_json(json{{"target", "golden"}}).target == "golden");
  CHECK(config_from_json(json{{"target", json::array({2, 1, 1})}}).target == "2,1,1");
  CHECK(config_from_json(json{{"target", 0.5}}).target == "0.5");
  CHECK_THROWS_AS(config_from_json(json{{"target", json::array({1.5})}}), ParameterError);
  CHECK(config_from_json(json{{"precision", "extended:256"}}).precision == Precision::Ext256);
}

TEST_CASE("validation") {
  ExperimentConfig c;
  c.command = "rho";
  CHECK_NOTHROW(validate(c));
  c.command = "nope";
  CHECK_THROWS_AS(validate(c), ParameterError);
  c.command = "rho";
  c.tol = 0.0;
  CHECK_THROWS_AS(validate(c), ParameterError);
  c.tol = 1e-10;
  c.side = "up";
  CHECK_THROWS_AS(validate(c), ParameterError);
  c.side = "both";
  c.target = "1,x";
  CHECK_THROWS_AS(validate(c), DomainError);
}

TEST_CASE("numbers print with 17 significant digits and round-trip (property)") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(u(rng), ex(rng));
    const std::string s = format_number(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
    CHECK(s.find(',') == std::string::npos);
  }
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-0.0) == "0");
}

TEST_CASE("csv layout") {
  Table t{"t", {"a", "b"}, {{"1", "x,y"}, {"2", "say \"hi\""}}};
  std::ostringstream os;
  write_csv(os, t);
  CHECK(os.str() == "a,b\n1,\"x,y\"\n2,\"say \"\"hi\"\"\"\n");
}

TEST_CASE("run writes a report whose verdict matches its assertions") {
  const auto dir = std::filesystem::temp_directory_path() / "critlab_test_lab";
  std::filesystem::remove_all(dir);
  ExperimentConfig c;
  c.command = "tongue";
  c.target = "0/1";
  c.side = "right";
  c.tol = 1e-13;
  c.out = dir.string();
  const ExperimentReport r = run(c);
  CHECK(r.passed());
  REQUIRE(r.tables.size() == 1);
  CHECK(std::stod(r.tables[0].rows[0][3]) == doctest::Approx(0.15915494309189535).epsilon(1e-12));
  std::ifstream in(dir / "tongue_report.json");
  const json j = json::parse(in);
  CHECK(j["passed"] == true);
  CHECK(config_from_json(j["config"]) == c);
  std::ifstream csv(dir / "tongue_tongue.csv", std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(csv)), std::istreambuf_iterator<char>());
  CHECK(text.rfind("p,q,side,theta", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);

  c.command = "tongue";
  c.target = "golden";
  CHECK_THROWS_AS(run(c), ParameterError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("check reports an injected fault and is seed-reproducible") {
  const auto dir = std::filesystem::temp_directory_path() / "critlab_test_check";
  ExperimentConfig c;
  c.command = "check";
  c.seed = 5;
  c.out = dir.string();
  const ExperimentReport a = run(c), b = run(c);
  CHECK(a.passed());
  CHECK(a.to_json()["tables"] == b.to_json()["tables"]);
  c.inject_fault = true;
  CHECK_FALSE(run(c).passed());
  std::filesystem::remove_all(dir);
}
