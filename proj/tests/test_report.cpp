#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sosz/report.hpp"

using namespace sosz;
using nlohmann::json;

namespace {

std::string without_timing(const VerificationReport& report) {
  VerificationReport r = report;
  r.seconds = 0.0;
  for (JobReport& j : r.jobs) j.seconds = 0.0;
  return report_to_json(r);
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("sosz_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall = R"({
  "threads": 2,
  "jobs": [
    {"name": "trig", "family": "sin", "suites": ["identities", "jensen"],
     "grid": {"x_min": -3, "x_max": 3, "y_min": -2, "y_max": 2, "nx": 9, "ny": 7}},
    {"name": "b", "family": "bessel", "params": {"alpha": [0, 1.3]},
     "grid": {"x_min": -3, "x_max": 3, "y_min": -3, "y_max": 3, "nx": 7, "ny": 7},
     "chain_samples": 4, "suites": ["identities", "chains", "inequalities", "jensen"], "plot": ["modsq"]},
    {"name": "bad", "family": "laguerre", "params": {"n": 2, "alpha": -2.5}, "suites": ["jensen"],
     "expect": "violated"}
  ]
})";

}  // namespace

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config("[]"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"jobs": [], "extra": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"jobs": [{"name": "a", "family": "riemann", "suites": ["jensen"]}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"jobs": [{"name": "a", "family": "sin", "suites": []}]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"jobs": [{"name": "a", "family": "sin", "suites": ["magic"]}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"jobs": [{"name": "a", "family": "sin", "suites": ["chains"]}]})"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"jobs": [{"name": "a", "family": "laguerre", "params": {"n": 2}, "suites": ["interlacing"]}]})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"jobs": [{"name": "a", "family": "bessel", "params": {"alpha": [-2]}, "suites": ["jensen"]}]})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"jobs": [{"name": "a", "family": "bessel", "params": {"alpha": []}, "suites": ["jensen"]}]})"),
      ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"jobs": [{"name": "a", "family": "sin", "suites": ["jensen"]},
                                            {"name": "a", "family": "cos", "suites": ["jensen"]}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"jobs": [{"name": "a", "family": "sin", "suites": ["jensen"],
                                             "policy": {"rel_tol": -1}}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"jobs": [{"name": "a", "family": "sin", "suites": ["jensen"],
                                             "expect": "maybe"}]})"),
                  ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/sosz.json"), ConfigError);
}

TEST_CASE("sweeps expand to the cartesian product") {
  const RunConfig c = parse_config(
      R"({"jobs": [{"name": "l", "family": "laguerre", "params": {"n": [1, 2, 3], "alpha": [0, 0.5]},
                    "suites": ["jensen"]}]})");
  const auto members = c.jobs[0].members();
  CHECK(members.size() == 6);
  for (const FunctionFamily& f : members) CHECK(f.kind() == FamilyKind::Laguerre);
  CHECK(parse_config(R"({"jobs": [{"name": "c", "family": "cos", "suites": ["jensen"]}]})").jobs[0].members()[0] ==
        FunctionFamily::cosine());
}

TEST_CASE("random samples are reproducible from the seed") {
  const char* text = R"({"jobs": [{"name": "r", "family": "jacobi",
      "random": {"seed": 42, "count": 5, "ranges": {"n": [1, 6], "alpha": [-1, 1], "beta": [-1, 1]}},
      "suites": ["jensen"]}]})";
  const auto a = parse_config(text).jobs[0].members();
  const auto b = parse_config(text).jobs[0].members();
  REQUIRE(a.size() == 5);
  CHECK(a == b);
  for (const FunctionFamily& f : a) {
    CHECK(f.degree() >= 1);
    CHECK(f.degree() <= 6);
    CHECK(f.param(1) >= -1.0);
    CHECK(f.param(1) <= 1.0);
  }
  std::string other = text;
  other.replace(other.find("42"), 2, "43");
  CHECK_FALSE(parse_config(other).jobs[0].members() == a);
}

TEST_CASE("SOSZ_MAX_TERMS overrides the term cap") {
  RunConfig c = parse_config(R"({"jobs": [{"name": "s", "family": "sin", "suites": ["jensen"]}]})");
  setenv("SOSZ_MAX_TERMS", "123", 1);
  apply_environment(c);
  CHECK(c.jobs[0].policy.max_terms == 123);
  setenv("SOSZ_MAX_TERMS", "many", 1);
  CHECK_THROWS_AS(apply_environment(c), ConfigError);
  unsetenv("SOSZ_MAX_TERMS");
  apply_environment(c);
  CHECK(c.jobs[0].policy.max_terms == 123);
}

TEST_CASE("sin identities have closed-form residuals") {
  const RunConfig c = parse_config(R"({"jobs": [{"name": "t", "family": "sin", "suites": ["identities"]},
                                                {"name": "u", "family": "cos", "suites": ["identities"]}]})");
  const VerificationReport r = run_suite(c);
  REQUIRE(r.jobs.size() == 2);
  for (const char* tag : {"Eq2_1", "Eq2_3", "Eq2_4"}) {
    REQUIRE(r.jobs[0].identities.count(tag) == 1);
  }
  CHECK(r.jobs[1].identities.count("Eq2_2") == 1);
  CHECK(r.jobs[0].identities.at("Eq2_1").max_residual <= 1e-14);
  CHECK(r.jobs[1].identities.at("Eq2_2").max_residual <= 1e-14);
  for (const JobReport& j : r.jobs) {
    CHECK(j.outcome == Outcome::Passed);
    for (const auto& [tag, id] : j.identities) CHECK_MESSAGE(id.passed, tag);
  }
  CHECK(exit_code(r) == 0);
}

TEST_CASE("small suite outcomes and tags") {
  const VerificationReport r = run_suite(parse_config(kSmall));
  REQUIRE(r.jobs.size() == 4);
  CHECK(r.artifact_version == kArtifactVersion);
  CHECK(r.jobs[1].name == "b[0]");
  CHECK(r.jobs[2].name == "b[1]");
  CHECK(r.jobs[1].source_job == "b");
  const JobReport& b = r.jobs[1];
  for (const char* tag : {"Eq3_8", "Eq3_11", "Eq3_12"}) CHECK(b.identities.count(tag) == 1);
  for (const char* tag : {"Eq3_4", "Eq3_5", "Eq3_6"}) CHECK(b.chains.count(tag) == 1);
  for (const char* tag : {"Eq3_10", "Eq3_13", "Eq3_14"}) CHECK(b.inequalities.count(tag) == 1);
  CHECK(b.checks.count("Eq3_9") == 1);
  CHECK(b.grids.at("modsq").values.size() == 49);
  for (int i = 0; i < 3; ++i) CHECK_MESSAGE(r.jobs[i].outcome == Outcome::Passed, r.jobs[i].name);
  const JobReport& bad = r.jobs[3];
  CHECK(bad.outcome == Outcome::Violated);
  CHECK(bad.passed);
  REQUIRE(bad.jensen.has_value());
  CHECK(bad.jensen->witness.has_value());
  CHECK(exit_code(r) == 0);
}

TEST_CASE("unexpected violations give exit code 1") {
  const VerificationReport r = run_suite(parse_config(
      R"({"jobs": [{"name": "bad", "family": "laguerre", "params": {"n": 2, "alpha": -2.5}, "suites": ["jensen"]}]})"));
  CHECK(r.jobs[0].outcome == Outcome::Violated);
  CHECK_FALSE(r.jobs[0].passed);
  CHECK(exit_code(r) == 1);
}

TEST_CASE("evaluation errors are recorded without aborting other jobs") {
  const VerificationReport r = run_suite(parse_config(
      R"({"jobs": [{"name": "starved", "family": "bessel", "params": {"alpha": 0}, "suites": ["jensen"],
                    "policy": {"max_terms": 3}},
                   {"name": "fine", "family": "cos", "suites": ["jensen"]}]})"));
  REQUIRE(r.jobs.size() == 2);
  CHECK(r.jobs[0].outcome != Outcome::Passed);
  CHECK(r.jobs[1].outcome == Outcome::Passed);
  CHECK(exit_code(r) == 1);
}

TEST_CASE("reports are deterministic and round-trip") {
  const RunConfig c = parse_config(kSmall);
  const VerificationReport a = run_suite(c);
  RunConfig serial = c;
  serial.threads = 1;
  const VerificationReport b = run_suite(serial);
  CHECK(without_timing(a) == without_timing(b));
  const std::string text = report_to_json(a);
  const VerificationReport back = report_from_json(text);
  CHECK(report_to_json(back) == text);
  CHECK(back == a);
  const json doc = json::parse(text);
  CHECK(doc["artifact"]["version"] == kArtifactVersion);
  CHECK(doc["jobs"][0]["identities"]["Eq2_1"].contains("max_residual"));
  CHECK_THROWS_AS(report_from_json("{}"), InvalidParameter);
}

TEST_CASE("seeded jobs record the seed") {
  const VerificationReport r = run_suite(parse_config(
      R"({"jobs": [{"name": "r", "family": "bessel", "random": {"seed": 7, "count": 2, "ranges": {"alpha": [0, 1]}},
                    "grid": {"nx": 5, "ny": 5}, "suites": ["jensen"]}]})"));
  REQUIRE(r.jobs.size() == 2);
  for (const JobReport& j : r.jobs) CHECK(j.seed == 7ULL);
}

TEST_CASE("empty report is a valid document") {
  const VerificationReport r;
  const json doc = json::parse(report_to_json(r));
  CHECK(doc["jobs"].is_array());
  CHECK(doc["jobs"].empty());
  CHECK(exit_code(r) == 0);
  const auto dir = scratch_dir("empty");
  emit_report(r, ReportFormat::Json, (dir / "report.json").string());
  CHECK(json::parse(slurp(dir / "report.json"))["jobs"].empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("CSV grids have nx * ny rows") {
  GridData d;
  d.grid = GridSpec{-1.0, 1.0, 0.0, 2.0, 4, 3};
  for (std::size_t k = 0; k < d.grid.size(); ++k) d.values.push_back(0.1 * static_cast<double>(k));
  const std::string csv = grid_to_csv(d);
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "x,y,value");
  int rows = 0;
  std::string last;
  while (std::getline(ss, line)) {
    ++rows;
    last = line;
  }
  CHECK(rows == 12);
  CHECK(last == "1,2,1.1000000000000001");

  const VerificationReport r = run_suite(parse_config(
      R"({"jobs": [{"name": "j0 plot", "family": "bessel", "params": {"alpha": 0}, "suites": ["identities"],
                    "grid": {"nx": 101, "ny": 101}, "plot": ["modsq", "d2y"]}]})"));
  const auto dir = scratch_dir("csv");
  emit_report(r, ReportFormat::Csv, dir.string());
  const std::string modsq = slurp(dir / "j0_plot_modsq.csv");
  CHECK(std::count(modsq.begin(), modsq.end(), '\n') == 101 * 101 + 1);
  CHECK(std::filesystem::exists(dir / "j0_plot_d2y.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("filesystem errors name the path") {
  const VerificationReport r;
  try {
    emit_report(r, ReportFormat::Json, "/proc/sosz/forbidden/report.json");
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/proc/sosz/forbidden/report.json") != std::string::npos);
  }
}

TEST_CASE("grid quantities use the direct route") {
  const FunctionFamily s = FunctionFamily::sine();
  const ComplexPoint z(0.4, 0.9);
  CHECK(grid_quantity(s, GridQuantity::Modsq, z) == modsq_direct(s, z));
  CHECK(grid_quantity(s, GridQuantity::Ydy, z) == doctest::Approx(z.y() * std::sinh(2.0 * z.y())).epsilon(1e-8));
  CHECK(grid_quantity(s, GridQuantity::D2y, z) == doctest::Approx(2.0 * std::cosh(2.0 * z.y())).epsilon(1e-8));
  CHECK_THROWS_AS(grid_quantity_from_string("phase"), InvalidParameter);
}
