#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <cmath>
#include <sstream>

#include "solvq/cli.hpp"
#include "solvq/errors.hpp"
#include "solvq/report.hpp"

using namespace solvq;

namespace {

std::string temp_path(const std::string& name) {
  return std::string("cli_test_") + name;
}

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config parsing, validation and round trip") {
  Json j = Json::parse(R"json({"kind":"exp_osc","alpha":0.0,"beta":1.0,"gamma":2.0,
                           "tolerances":{"criteria":1e-10,"green":1e-8},
                           "grid":{"x_max":16,"samples_per_level":8},
                           "seed":0})json");
  RunConfig cfg = RunConfig::from_json(j);
  CHECK(cfg.x_max == 16);
  PairPtr pair = cfg.make_pair();
  CHECK(pair->kind == CoefficientKind::ExpOsc);

  RunConfig echoed = RunConfig::from_json(cfg.to_json());
  CHECK(echoed.to_json() == cfg.to_json());
  CHECK(echoed.tol_criteria == cfg.tol_criteria);
  CHECK(echoed.x_max == cfg.x_max);
  CHECK(echoed.seed == cfg.seed);

  CHECK_THROWS_AS(
      RunConfig::from_json(Json::parse(R"json({"kind":"constant","r":1,"q":1,
                                           "grid":{"x_max":2}})json")),
      ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json(Json::parse(R"json({"kind":"constant","r":1,"q":1,
                                           "tolerances":{"criteria":0}})json")),
      ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(Json::parse(R"json({"r":"1"})json")), ConfigError);

  RunConfig exprc = RunConfig::from_json(
      Json::parse(R"json({"kind":"expr","r":"exp(abs(x))","q":"1+sin(pow(abs(x),2))"})json"));
  PairPtr ep = exprc.make_pair();
  CHECK(ep->r(1.0) == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("example8 subcommand emits the decision and route") {
  std::string out = temp_path("ex8.json");
  int rc = run_cli({"example8", "--alpha", "0", "--beta", "1", "--gamma", "2",
                    "--space", "L2", "--out", out});
  CHECK(rc == 0);
  Json j = Json::parse(slurp(out));
  CHECK(j["schema"] == "solvq/1");
  CHECK(j["decision"] == "Solvable");
  CHECK(j["route"] == "Thm8.12/Eq8.25");
  std::remove(out.c_str());
}

TEST_CASE("classify subcommand on the identity pair") {
  std::string cfg = temp_path("identity.json");
  write(cfg, R"json({"kind":"constant","r":1,"q":1,"grid":{"x_max":64}})json");
  std::string out = temp_path("classify.json");
  int rc = run_cli({"classify", "--config", cfg, "--space", "C", "--out", out});
  CHECK(rc == 0);
  Json j = Json::parse(slurp(out));
  CHECK(j["decision"] == "NotSolvable");
  CHECK(j["command"] == "classify");
  std::remove(cfg.c_str());
  std::remove(out.c_str());
}

TEST_CASE("d-scan emits the CSV header and constant column") {
  std::string cfg = temp_path("id2.json");
  write(cfg, R"json({"kind":"constant","r":1,"q":1})json");
  std::string out = temp_path("d.csv");
  int rc = run_cli({"d-scan", "--config", cfg, "--xmin", "-2", "--xmax", "2",
                    "--n", "5", "--out", out});
  CHECK(rc == 0);
  std::string text = slurp(out);
  CHECK(text.rfind("x,d,residual\n", 0) == 0);
  // second line: x = -2 with d within solver tolerance of 1
  std::size_t nl = text.find('\n');
  std::size_t c1 = text.find(',', nl + 1);
  std::size_t c2 = text.find(',', c1 + 1);
  CHECK(text.substr(nl + 1, c1 - nl - 1) == "-2");
  double d_val = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  CHECK(std::fabs(d_val - 1.0) <= 1e-9);
  std::remove(cfg.c_str());
  std::remove(out.c_str());
}

TEST_CASE("byte-identical reports for identical inputs") {
  std::string cfg = temp_path("id3.json");
  write(cfg, R"json({"kind":"constant","r":1,"q":1,"grid":{"x_max":16}})json");
  std::string out1 = temp_path("r1.json"), out2 = temp_path("r2.json");
  CHECK(run_cli({"classify", "--config", cfg, "--space", "L2", "--out", out1}) == 0);
  CHECK(run_cli({"classify", "--config", cfg, "--space", "L2", "--out", out2}) == 0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK(run_cli({"norms", "--config", cfg, "--p", "2", "--samples", "10",
                 "--seed", "7", "--out", out1}) == 0);
  CHECK(run_cli({"norms", "--config", cfg, "--p", "2", "--samples", "10",
                 "--seed", "7", "--out", out2}) == 0);
  CHECK(slurp(out1) == slurp(out2));
  std::remove(cfg.c_str());
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("usage errors return nonzero") {
  CHECK(run_cli({"classify"}) != 0);           // missing required options
  CHECK(run_cli({"no-such-command"}) != 0);
  std::string cfg = temp_path("bad.json");
  write(cfg, R"json({"kind":"nope"})json");
  CHECK(run_cli({"classify", "--config", cfg, "--space", "L2"}) == 1);
  std::remove(cfg.c_str());
}

TEST_CASE("covering subcommand writes segments and verification") {
  std::string cfg = temp_path("id4.json");
  write(cfg, R"json({"kind":"constant","r":1,"q":1})json");
  std::string out = temp_path("chain.json");
  int rc = run_cli({"covering", "--config", cfg, "--x", "0", "--n", "6",
                    "--out", out});
  CHECK(rc == 0);
  Json j = Json::parse(slurp(out));
  CHECK(j["segments"].size() == 6);
  CHECK(j["verify"]["max_accum_violation"].get<double>() <= 1e-7);
  std::remove(cfg.c_str());
  std::remove(out.c_str());
}

TEST_CASE("solve subcommand emits x,y,err rows") {
  std::string cfg = temp_path("id5.json");
  write(cfg, R"json({"kind":"constant","r":1,"q":1})json");
  std::string out = temp_path("y.csv");
  int rc = run_cli({"solve", "--config", cfg, "--f", "exp(-x*x)", "--xmin",
                    "-4", "--xmax", "4", "--n", "17", "--out", out});
  CHECK(rc == 0);
  std::string text = slurp(out);
  CHECK(text.rfind("x,y,err\n", 0) == 0);
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == 18);
  std::remove(cfg.c_str());
  std::remove(out.c_str());
}
