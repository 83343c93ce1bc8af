#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sosz/core_math.hpp"
#include "sosz/special_functions.hpp"
#include "sosz/zero_certifier.hpp"

namespace sosz {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Invalid run configuration; reported before any evaluation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Suite { Identities, Chains, Inequalities, Jensen, Zeros, Interlacing };
std::string to_string(Suite suite);
Suite suite_from_string(const std::string& name);

/// Grid quantities that can be exported as plot data.
enum class GridQuantity { Modsq, Ydy, D2y };
std::string to_string(GridQuantity q);
GridQuantity grid_quantity_from_string(const std::string& name);

/// Value of a grid quantity at one point through the direct route.
double grid_quantity(const FunctionFamily& family, GridQuantity q, ComplexPoint z,
                     const TruncationPolicy& policy = {});

/// Uniform random parameter sample: `count` members drawn from the ranges.
/// Integer parameters (n) are drawn from the closed integer range.
struct RandomSample {
  unsigned long long seed = 0;
  int count = 0;
  std::map<std::string, std::pair<double, double>> ranges;
};

struct JobConfig {
  std::string name;
  // Kind name as accepted by family_kind_from_string; "sin" and "cos"
  // select the trigonometric member.
  std::string family;
  // Sweep lists per parameter name; members are the cartesian product.
  std::map<std::string, std::vector<double>> params;
  Normalization normalization = Normalization::Plain;
  std::optional<RandomSample> random;
  // Absent: default_grid per member.
  std::optional<GridSpec> grid;
  std::vector<Suite> suites;
  TruncationPolicy policy{};
  // "pass" or "violated".
  std::string expect = "pass";
  // Points per chain identity.
  int chain_samples = 24;
  // Search interval for non-polynomial zeros and interlacing.
  std::pair<double, double> zero_interval{0.0, 20.0};
  std::vector<GridQuantity> plot;

  /// Expands sweeps and the random block into family members. Throws
  /// ConfigError on inadmissible members.
  std::vector<FunctionFamily> members() const;
};

struct RunConfig {
  std::vector<JobConfig> jobs;
  int threads = 1;

  /// Throws ConfigError when a job is not admissible or a suite does not
  /// apply to its family.
  void validate() const;
};

/// Parses and validates a configuration document.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Replaces policy.max_terms of every job by SOSZ_MAX_TERMS when set.
void apply_environment(RunConfig& config);

struct IdentityResult {
  int order = 0;
  int points = 0;
  int failures = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  double floor = 0.0;
  bool passed = true;
  friend bool operator==(const IdentityResult&, const IdentityResult&) = default;
};

struct NonnegativityResult {
  int order = 0;
  int points = 0;
  long long terms_checked = 0;
  long long negative = 0;
  double min_coefficient = 0.0;
  bool passed = true;
  friend bool operator==(const NonnegativityResult&, const NonnegativityResult&) = default;
};

/// Scalar checks: limit cases and coefficient decompositions.
struct CheckResult {
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  // Informational checks do not affect the outcome.
  bool advisory = false;
  std::string detail;
  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct ChainResult {
  int samples = 0;
  int failures = 0;
  double max_residual = 0.0;
  // Largest residual / (10 * error estimate) over infinite-sum samples.
  double max_ratio = 0.0;
  bool finite = true;
  bool passed = true;
  friend bool operator==(const ChainResult&, const ChainResult&) = default;
};

struct ZeroResult {
  ZeroList zeros;
  std::optional<int> degree;
  int count = 0;
  std::optional<Certificate> certificate;
  friend bool operator==(const ZeroResult&, const ZeroResult&) = default;
};

struct InterlacingResult {
  ZeroList first;
  ZeroList second;
  bool passed = true;
  friend bool operator==(const InterlacingResult&, const InterlacingResult&) = default;
};

enum class Outcome { Passed, Violated, Inconclusive, Error };
std::string to_string(Outcome o);
Outcome outcome_from_string(const std::string& name);

/// Row-major values, y outer and x inner.
struct GridData {
  GridSpec grid;
  std::vector<double> values;
  friend bool operator==(const GridData&, const GridData&) = default;
};

struct JobReport {
  std::string name;
  std::string source_job;
  std::string family;
  FamilyKind kind = FamilyKind::SinCos;
  std::vector<double> params;
  Normalization normalization = Normalization::Plain;
  GridSpec grid;
  TruncationPolicy policy;
  std::vector<Suite> suites;
  std::optional<unsigned long long> seed;
  std::string expect = "pass";
  Outcome outcome = Outcome::Passed;
  // outcome agrees with expect
  bool passed = true;
  double seconds = 0.0;
  std::map<std::string, IdentityResult> identities;
  std::map<std::string, NonnegativityResult> nonnegativity;
  std::map<std::string, CheckResult> checks;
  std::map<std::string, ChainResult> chains;
  std::map<std::string, Certificate> inequalities;
  std::optional<Certificate> jensen;
  std::optional<ZeroResult> zeros;
  std::optional<InterlacingResult> interlacing;
  std::map<std::string, GridData> grids;
  std::vector<std::string> errors;
  friend bool operator==(const JobReport&, const JobReport&) = default;
};

struct VerificationReport {
  std::string artifact_version = kArtifactVersion;
  std::vector<JobReport> jobs;
  double seconds = 0.0;
  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// Runs every member of every job, `config.threads` at a time. Evaluation
/// errors are recorded in the member's report.
VerificationReport run_suite(const RunConfig& config);

/// Checks one family member with the given suites.
JobReport run_member(const JobConfig& job, const FunctionFamily& family);

/// 0 when every job met its expectation, 1 otherwise.
int exit_code(const VerificationReport& report);

enum class ReportFormat { Json, Csv };
ReportFormat report_format_from_string(const std::string& name);

/// Deterministic JSON with sorted keys.
std::string report_to_json(const VerificationReport& report, int indent = 2);
VerificationReport report_from_json(const std::string& text);

/// CSV rows "x,y,value" in %.17g for one grid.
std::string grid_to_csv(const GridData& data);

/// JSON: writes the document to `path`. CSV: writes one file
/// <job>_<quantity>.csv per stored grid into the directory `path`.
/// Throws std::runtime_error naming the path on filesystem errors.
void emit_report(const VerificationReport& report, ReportFormat format, const std::string& path);

}  // namespace sosz
