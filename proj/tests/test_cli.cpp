#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "sosz_cli_stdout.txt";
  const std::string cmd = std::string("\"") + SOSZ_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sosz_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("verify writes a report and returns 0") {
  const fs::path dir = scratch("verify");
  write(dir / "c.json", R"({"jobs": [{"name": "s", "family": "sin", "suites": ["identities", "jensen"],
                                      "grid": {"nx": 9, "ny": 9}},
                                     {"name": "bad", "family": "laguerre", "params": {"n": 2, "alpha": -2.5},
                                      "suites": ["jensen"], "expect": "violated"}]})");
  const Run r = run("verify --config " + (dir / "c.json").string() + " --out " + dir.string());
  CHECK_MESSAGE(r.code == 0, r.out);
  const auto doc = nlohmann::json::parse(std::ifstream(dir / "report.json"));
  CHECK(doc["jobs"].size() == 2);
  CHECK(doc["jobs"][1]["outcome"] == "violated");
  fs::remove_all(dir);
}

TEST_CASE("verify csv writes plot files") {
  const fs::path dir = scratch("csv");
  write(dir / "c.json", R"({"jobs": [{"name": "s", "family": "cos", "suites": ["jensen"],
                                      "grid": {"nx": 5, "ny": 3}}]})");
  const Run r = run("verify --config " + (dir / "c.json").string() + " --out " + dir.string() + " --format csv");
  CHECK_MESSAGE(r.code == 0, r.out);
  CHECK(fs::exists(dir / "report.json"));
  std::ifstream csv(dir / "s_modsq.csv");
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 16);
  fs::remove_all(dir);
}

TEST_CASE("unexpected violation returns 1") {
  const fs::path dir = scratch("violation");
  write(dir / "c.json", R"({"jobs": [{"name": "bad", "family": "jacobi", "params": {"n": 2, "alpha": -1.6, "beta": -1.6},
                                      "suites": ["jensen"]}]})");
  CHECK(run("verify --config " + (dir / "c.json").string() + " --out " + dir.string()).code == 1);
  fs::remove_all(dir);
}

TEST_CASE("configuration errors return 2") {
  const fs::path dir = scratch("config");
  write(dir / "c.json", R"({"jobs": [{"name": "x", "family": "sin", "suites": ["jensen"], "colour": 1}]})");
  const Run r = run("verify --config " + (dir / "c.json").string() + " --out " + dir.string());
  CHECK(r.code == 2);
  CHECK(r.out.find("colour") != std::string::npos);
  CHECK(run("verify --config " + (dir / "missing.json").string()).code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("zeros --family laguerre --params n=2.5,alpha=0").code == 2);
  fs::remove_all(dir);
}

TEST_CASE("policy flags and environment are applied") {
  const fs::path dir = scratch("policy");
  write(dir / "c.json", R"({"jobs": [{"name": "s", "family": "sin", "suites": ["jensen"], "grid": {"nx": 3, "ny": 3}}]})");
  const Run r = run("verify --config " + (dir / "c.json").string() + " --out " + dir.string() +
                    " --policy.rel-tol 1e-12 --jobs 2");
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(std::ifstream(dir / "report.json"));
  CHECK(doc["jobs"][0]["policy"]["rel_tol"] == 1e-12);
  const Run e = run("verify --config " + (dir / "c.json").string() + " --out " + dir.string() + " --policy.max-terms 77");
  CHECK(e.code == 0);
  CHECK(nlohmann::json::parse(std::ifstream(dir / "report.json"))["jobs"][0]["policy"]["max_terms"] == 77);
  fs::remove_all(dir);
}

TEST_CASE("zeros subcommand") {
  const Run r = run("zeros --family laguerre --params n=1,alpha=0.5 --interval 0,5");
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["zeros"].size() == 1);
  CHECK(doc["zeros"][0]["location"].get<double>() == doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("grid subcommand") {
  const fs::path dir = scratch("grid");
  const Run r = run("grid --family bessel --params alpha=0 --quantity modsq --grid -1,1,-1,1,3,2 --out " +
                    (dir / "g.csv").string());
  REQUIRE(r.code == 0);
  std::ifstream in(dir / "g.csv");
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "x,y,value");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 6);
  CHECK(run("grid --family bessel --params alpha=0 --grid 1,0,0,1,3,3").code == 2);
  fs::remove_all(dir);
}
