#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "nemem/cli.hpp"

using namespace nemem;
using nlohmann::json;

namespace {
struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "nemem");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("nemem_test_" + name);
}
}  // namespace

TEST_CASE("parse_matrix") {
  const Eigen::MatrixXd M = parse_matrix("2.5 0; 0 0.8; 0 0", 3, 2);
  CHECK(M(0, 0) == 2.5);
  CHECK(M(1, 1) == 0.8);
  CHECK(parse_matrix(" 1e-3  -2 ;+3 4;5 6 ", 3, 2)(0, 0) == 1e-3);
  CHECK_THROWS_AS(parse_matrix("1 0; 0 1", 3, 2), ParseError);
  CHECK_THROWS_AS(parse_matrix("1 0 0; 0 1; 0 0", 3, 2), ParseError);
  try {
    parse_matrix("1 0; 0 abc; 0 0", 3, 2);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("abc") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_matrix("1 0; 0 nan; 0 0", 3, 2), ParseError);
}

TEST_CASE("energy command") {
  Run r = run({"energy", "--lamM", "3", "--delta", "1", "--r", "8", "--mu", "2"});
  REQUIRE(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["region"] == "W");
  CHECK(j["energy"].get<double>() == doctest::Approx(0.58333333).epsilon(1e-8));

  r = run({"--r", "8", "--mu", "2", "energy", "--F", "2.5 0; 0 0.8; 0 0"});
  REQUIRE(r.code == kExitOk);
  j = json::parse(r.out);
  CHECK(j["region"] == "S");
  CHECK(j["energy"].get<double>() == doctest::Approx(0.3425).epsilon(1e-13));
  CHECK(j["energy_unrelaxed"].get<double>() == doctest::Approx(0.3425).epsilon(1e-13));

  r = run({"energy", "--lamM", "3", "--delta", "1", "--r", "8", "--mu", "2", "--normalized"});
  CHECK(json::parse(r.out)["energy"].get<double>() == doctest::Approx(0.58333333).epsilon(1e-8));

  r = run({"energy", "--F", "1 2; 2 4; 3 6", "--r", "8", "--mu", "2"});
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out)["energy_unrelaxed"].is_null());

  r = run({"energy", "--lamM", "1", "--delta", "2", "--r", "8"});
  CHECK(r.code == kExitDomain);
}

TEST_CASE("region command") {
  Run r = run({"region", "--lamM", "1.5", "--delta", "1.0", "--r", "8"});
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out) == json::parse(R"({"region":"L"})"));
  r = run({"region", "--lamM", "1.6", "--delta", "2.0", "--r", "8"});
  CHECK(json::parse(r.out)["region"] == "M");
  r = run({"region", "--lamM", "1", "--delta", "2", "--r", "8"});
  CHECK(json::parse(r.out)["region"] == "Invalid");
}

TEST_CASE("stress command") {
  Run r = run({"stress", "--F", "2.5 0; 0 0.8; 0 0", "--r", "8", "--mu", "2"});
  REQUIRE(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["principal_values"][0].get<double>() == doctest::Approx(2.125).epsilon(1e-12));
  CHECK(j["principal_values"][1].get<double>() == doctest::Approx(1.56).epsilon(1e-12));
  CHECK(j["kind"] == "biaxial");

  r = run({"stress", "--F", "1 0; 0 1; 0 0", "--r", "8"});
  CHECK(r.code == kExitDomain);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("usage errors") {
  Run r = run({"energy", "--F", "1 0; 0 x1; 0 0"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("x1") != std::string::npos);
  CHECK(run({"energy", "--lamM", "abc", "--delta", "1"}).code == kExitUsage);
  CHECK(run({"energy"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"bogus"}).code == kExitUsage);
  CHECK(run({"verify", "--suite", "nope"}).code == kExitUsage);
  CHECK(run({"energy", "--lamM", "1", "--delta", "1", "--mu", "-1"}).code == kExitUsage);
  CHECK(run({"energy", "--lamM", "1", "--delta", "1", "--r", "0.5"}).code == kExitUsage);
  CHECK(run({"scan", "--lamM-range", "1", "3", "2.5", "--delta-range", "0", "1", "3"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("laminate command") {
  Run r = run({"laminate", "--F", "1 0; 0 1; 0 0", "--r", "8", "--mu", "2"});
  REQUIRE(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["atoms"].size() == 4);
  r = run({"laminate", "--F", "2.5 0; 0 0.8; 0 0", "--r", "8", "--mu", "2"});
  CHECK(json::parse(r.out)["atoms"].size() == 1);
  r = run({"laminate", "--lamM", "3", "--delta", "1", "--r", "8", "--mu", "2"});
  CHECK(json::parse(r.out)["atoms"].size() == 2);
}

TEST_CASE("relax command") {
  Run r = run({"relax", "--F", "2.5 0; 0 0.8; 0 0", "--r", "8", "--mu", "2", "--depth", "1", "--n-azimuth", "16",
               "--n-polar", "4", "--n-b", "8", "--n-random", "8", "--t-grid", "20", "--refine-iters", "5"});
  REQUIRE(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(0.3425).epsilon(1e-9));
  CHECK(j.contains("best_measure"));
  CHECK(run({"relax", "--F", "1 0; 0 1; 0 0", "--depth", "5"}).code == kExitUsage);
}

TEST_CASE("scan command") {
  Run r = run({"scan", "--lamM-range", "1", "3", "3", "--delta-range", "0.5", "2.5", "3", "--r", "8"});
  REQUIRE(r.code == kExitOk);
  std::vector<std::string> rows = lines(r.out);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == "lamM,delta,region,energy,sigma1,sigma2");
  CHECK(run({"scan", "--lamM-range", "1", "3", "3", "--delta-range", "0.5", "2.5", "3", "--r", "8"}).out == r.out);

  r = run({"scan", "--lamM-range", "2", "3", "2", "--delta-range", "1.41421356", "2", "2", "--r", "8", "--mu",
           "2", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j[0]["lamM"] == 2.0);
  CHECK(j[0]["energy"].get<double>() == 0.0);
  CHECK(j[0]["region"] == "L");

  r = run({"scan", "--lamM-range", "1", "2", "2", "--delta-range", "2", "3", "2", "--r", "8"});
  REQUIRE(r.code == kExitOk);
  rows = lines(r.out);
  CHECK(rows[1].rfind("1,2,Invalid", 0) == 0);
}

TEST_CASE("scan output is independent of the thread count") {
  const std::vector<std::string> args = {"scan", "--lamM-range", "0.5", "4", "37", "--delta-range", "0.1",
                                         "6", "29", "--r", "8", "--mu", "2"};
  setenv("NEMEM_THREADS", "1", 1);
  const std::string serial = run(args).out;
  setenv("NEMEM_THREADS", "4", 1);
  const std::string parallel = run(args).out;
  unsetenv("NEMEM_THREADS");
  CHECK(serial == parallel);
  CHECK(lines(serial).size() == 37 * 29 + 1);
}

TEST_CASE("file output and I/O errors") {
  const auto path = temp_path("scan.csv");
  Run r = run({"scan", "--lamM-range", "1", "3", "3", "--delta-range", "0.5", "2.5", "3", "--r", "8", "--out",
               path.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.empty());
  CHECK(lines(slurp(path)).size() == 10);
  std::filesystem::remove(path);

  r = run({"scan", "--lamM-range", "1", "3", "3", "--delta-range", "0.5", "2.5", "3", "--out",
           "/nonexistent-dir/x/y.csv"});
  CHECK(r.code == kExitIO);
}

TEST_CASE("config file supplies options") {
  const auto path = temp_path("config.ini");
  {
    std::ofstream cfg(path);
    cfg << "r = 8\nmu = 2\n";
  }
  Run r = run({"--config", path.string(), "energy", "--lamM", "3", "--delta", "1"});
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out)["energy"].get<double>() == doctest::Approx(0.58333333).epsilon(1e-8));
  // The command line wins over the file.
  r = run({"--config", path.string(), "--mu", "4", "energy", "--lamM", "3", "--delta", "1"});
  CHECK(json::parse(r.out)["energy"].get<double>() == doctest::Approx(2.0 * 0.58333333).epsilon(1e-8));
  std::filesystem::remove(path);
}

TEST_CASE("verify command") {
  Run r = run({"verify", "--suite", "frame", "--r", "8", "--samples", "50", "--seed", "7"});
  REQUIRE(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["suite"] == "frame");
  CHECK(j["pass"] == true);
  CHECK(j["r"] == 8.0);
  CHECK(run({"verify", "--suite", "frame", "--r", "8", "--samples", "50", "--seed", "7"}).out == r.out);

  r = run({"verify", "--suite", "appendixA", "--r", "8", "--grid", "20"});
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out)["pass"] == true);
}

TEST_CASE("energy3d command") {
  Run r = run({"energy3d", "--F", "1 0 0; 0 1 0; 0 0 1", "--n", "1 0 0", "--r", "8", "--mu", "2"});
  REQUIRE(r.code == kExitOk);
  json j = json::parse(r.out);
  CHECK(j["energy_W3D"].get<double>() == doctest::Approx(1.25));
  CHECK(j["energy_We"].get<double>() == doctest::Approx(1.25));
  r = run({"energy3d", "--F", "2 0 0; 0 1 0; 0 0 1", "--r", "8"});
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out)["energy_W3D"].is_null());
  CHECK(run({"energy3d", "--F", "1 0 0; 0 1 0; 0 0 1", "--n", "1 1 0"}).code == kExitUsage);
}
