#include "sosz/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sosz/sos_engine.hpp"

namespace sosz {

using nlohmann::json;

namespace {

template <typename E, std::size_t N>
E enum_from(const std::array<const char*, N>& names, const std::string& name, const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (name == names[i]) return static_cast<E>(i);
  }
  throw InvalidParameter(std::string("unknown ") + what + " '" + name + "'");
}

constexpr std::array<const char*, 6> kSuiteNames = {"identities", "chains", "inequalities",
                                                     "jensen", "zeros", "interlacing"};
constexpr std::array<const char*, 3> kQuantityNames = {"modsq", "ydy", "d2y"};
constexpr std::array<const char*, 4> kOutcomeNames = {"passed", "violated", "inconclusive", "error"};

}  // namespace

std::string to_string(Suite suite) { return kSuiteNames[static_cast<std::size_t>(suite)]; }
Suite suite_from_string(const std::string& name) {
  return enum_from<Suite>(kSuiteNames, name, "suite");
}
std::string to_string(GridQuantity q) { return kQuantityNames[static_cast<std::size_t>(q)]; }
GridQuantity grid_quantity_from_string(const std::string& name) {
  return enum_from<GridQuantity>(kQuantityNames, name, "grid quantity");
}
std::string to_string(Outcome o) { return kOutcomeNames[static_cast<std::size_t>(o)]; }
Outcome outcome_from_string(const std::string& name) {
  return enum_from<Outcome>(kOutcomeNames, name, "outcome");
}

ReportFormat report_format_from_string(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw InvalidParameter("unknown report format '" + name + "'");
}

double grid_quantity(const FunctionFamily& family, GridQuantity q, ComplexPoint z,
                     const TruncationPolicy& policy) {
  switch (q) {
    case GridQuantity::Modsq: return modsq_direct(family, z, policy);
    case GridQuantity::Ydy: return z.y() == 0.0 ? 0.0 : z.y() * dy_fd(family, z, 1, policy);
    case GridQuantity::D2y: return dy_fd(family, z, 2, policy);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

const std::vector<std::string>& param_names(FamilyKind kind) {
  static const std::map<FamilyKind, std::vector<std::string>> names = {
      {FamilyKind::SinCos, {"which"}},
      {FamilyKind::Bessel, {"alpha"}},
      {FamilyKind::Hyp0F1, {"c"}},
      {FamilyKind::Laguerre, {"n", "alpha"}},
      {FamilyKind::Hyp1F1, {"a", "c"}},
      {FamilyKind::Jacobi, {"n", "alpha", "beta"}},
      {FamilyKind::Hyp2F1, {"a", "b", "c"}}};
  return names.at(kind);
}

FamilyKind job_kind(const JobConfig& job) {
  try {
    return family_kind_from_string(job.family);
  } catch (const InvalidParameter& e) {
    throw ConfigError("job '" + job.name + "': " + e.what());
  }
}

// Parameter lists with the trigonometric shorthand resolved.
std::map<std::string, std::vector<double>> resolved_params(const JobConfig& job) {
  auto params = job.params;
  if (job.family == "sin" || job.family == "cos") {
    if (params.count("which")) {
      throw ConfigError("job '" + job.name + "': 'which' is implied by family '" + job.family + "'");
    }
    params["which"] = {job.family == "sin" ? 0.0 : 1.0};
  }
  return params;
}

}  // namespace

std::vector<FunctionFamily> JobConfig::members() const {
  const FamilyKind kind = job_kind(*this);
  const auto& names = param_names(kind);
  const auto params = resolved_params(*this);
  for (const auto& [key, values] : params) {
    if (std::find(names.begin(), names.end(), key) == names.end()) {
      throw ConfigError("job '" + name + "': unknown parameter '" + key + "' for " + to_string(kind));
    }
    if (values.empty()) throw ConfigError("job '" + name + "': sweep list for '" + key + "' is empty");
  }
  if (random) {
    for (const auto& [key, range] : random->ranges) {
      if (std::find(names.begin(), names.end(), key) == names.end()) {
        throw ConfigError("job '" + name + "': unknown random parameter '" + key + "'");
      }
      if (params.count(key)) {
        throw ConfigError("job '" + name + "': parameter '" + key + "' is both fixed and random");
      }
      if (!(range.first <= range.second)) {
        throw ConfigError("job '" + name + "': empty random range for '" + key + "'");
      }
    }
    if (random->count < 1) throw ConfigError("job '" + name + "': random count must be >= 1");
  }
  std::vector<std::vector<double>> rows;
  if (random) {
    std::mt19937_64 rng(random->seed);
    for (int s = 0; s < random->count; ++s) {
      std::vector<double> row;
      for (const auto& key : names) {
        if (auto it = random->ranges.find(key); it != random->ranges.end()) {
          if (key == "n") {
            std::uniform_int_distribution<long long> d(static_cast<long long>(std::ceil(it->second.first)),
                                                       static_cast<long long>(std::floor(it->second.second)));
            row.push_back(static_cast<double>(d(rng)));
          } else {
            std::uniform_real_distribution<double> d(it->second.first, it->second.second);
            row.push_back(d(rng));
          }
        } else if (auto p = params.find(key); p != params.end() && p->second.size() == 1) {
          row.push_back(p->second.front());
        } else {
          throw ConfigError("job '" + name + "': random jobs need a range or a single value for '" + key + "'");
        }
      }
      rows.push_back(row);
    }
  } else {
    rows.emplace_back();
    for (const auto& key : names) {
      auto p = params.find(key);
      if (p == params.end()) throw ConfigError("job '" + name + "': missing parameter '" + key + "'");
      std::vector<std::vector<double>> next;
      for (const auto& row : rows) {
        for (double v : p->second) {
          auto r = row;
          r.push_back(v);
          next.push_back(std::move(r));
        }
      }
      rows = std::move(next);
    }
  }
  std::vector<FunctionFamily> out;
  for (const auto& row : rows) {
    try {
      out.emplace_back(kind, row, normalization);
    } catch (const InvalidParameter& e) {
      throw ConfigError("job '" + name + "': " + e.what());
    }
  }
  return out;
}

void RunConfig::validate() const {
  if (threads < 1) throw ConfigError("threads must be >= 1");
  std::set<std::string> seen;
  for (const JobConfig& job : jobs) {
    if (job.name.empty()) throw ConfigError("every job needs a name");
    if (!seen.insert(job.name).second) throw ConfigError("duplicate job name '" + job.name + "'");
    if (job.suites.empty()) throw ConfigError("job '" + job.name + "': no suites");
    if (job.expect != "pass" && job.expect != "violated") {
      throw ConfigError("job '" + job.name + "': expect must be 'pass' or 'violated'");
    }
    if (job.chain_samples < 1) throw ConfigError("job '" + job.name + "': chain_samples must be >= 1");
    if (!(job.zero_interval.first < job.zero_interval.second)) {
      throw ConfigError("job '" + job.name + "': zero_interval must satisfy lo < hi");
    }
    try {
      job.policy.validate();
      if (job.grid) job.grid->validate();
    } catch (const InvalidParameter& e) {
      throw ConfigError("job '" + job.name + "': " + e.what());
    }
    const FamilyKind kind = job_kind(job);
    const auto members = job.members();
    for (Suite s : job.suites) {
      if (s == Suite::Interlacing && kind != FamilyKind::Bessel) {
        throw ConfigError("job '" + job.name + "': interlacing applies to bessel families");
      }
      if (s == Suite::Chains && kind == FamilyKind::SinCos) {
        throw ConfigError("job '" + job.name + "': no chain identities for sin and cos");
      }
      if (s == Suite::Zeros && kind == FamilyKind::Hyp2F1 &&
          !(job.zero_interval.first > -1.0 && job.zero_interval.second < 1.0)) {
        throw ConfigError("job '" + job.name + "': 2F1 zero interval must lie inside (-1, 1)");
      }
    }
  }
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* k) { return key == k; }) == keys.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

std::vector<double> number_list(const json& j) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) throw ConfigError("parameter values must be numbers or lists of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError("parameter values must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::pair<double, double> number_pair(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(where + " must be a list [lo, hi]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

GridSpec parse_grid(const json& j, const std::string& where) {
  reject_unknown(j, {"x_min", "x_max", "y_min", "y_max", "nx", "ny"}, where);
  GridSpec g;
  g.x_min = j.value("x_min", g.x_min);
  g.x_max = j.value("x_max", g.x_max);
  g.y_min = j.value("y_min", g.y_min);
  g.y_max = j.value("y_max", g.y_max);
  g.nx = j.value("nx", g.nx);
  g.ny = j.value("ny", g.ny);
  return g;
}

TruncationPolicy parse_policy(const json& j, const std::string& where) {
  reject_unknown(j, {"rel_tol", "consecutive_small", "max_terms"}, where);
  TruncationPolicy p;
  p.rel_tol = j.value("rel_tol", p.rel_tol);
  p.consecutive_small = j.value("consecutive_small", p.consecutive_small);
  p.max_terms = j.value("max_terms", p.max_terms);
  return p;
}

JobConfig parse_job(const json& j) {
  if (!j.is_object()) throw ConfigError("every job must be an object");
  JobConfig job;
  job.name = j.value("name", std::string());
  const std::string where = "job '" + job.name + "'";
  reject_unknown(j,
                 {"name", "family", "params", "normalization", "random", "grid", "suites", "policy",
                  "expect", "chain_samples", "zero_interval", "plot"},
                 where);
  if (!j.contains("family")) throw ConfigError(where + ": missing 'family'");
  job.family = j.at("family").get<std::string>();
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ConfigError(where + ": 'params' must be an object");
    for (const auto& [key, value] : j["params"].items()) job.params[key] = number_list(value);
  }
  const std::string norm = j.value("normalization", std::string("plain"));
  if (norm == "plain") {
    job.normalization = Normalization::Plain;
  } else if (norm == "c(c+1)") {
    job.normalization = Normalization::CTimesCPlusOne;
  } else {
    throw ConfigError(where + ": normalization must be 'plain' or 'c(c+1)'");
  }
  if (j.contains("random")) {
    const json& r = j["random"];
    reject_unknown(r, {"seed", "count", "ranges"}, where + " random");
    RandomSample s;
    if (!r.contains("seed")) throw ConfigError(where + ": random block needs a seed");
    s.seed = r.at("seed").get<unsigned long long>();
    s.count = r.value("count", 1);
    if (r.contains("ranges")) {
      for (const auto& [key, value] : r["ranges"].items()) {
        s.ranges[key] = number_pair(value, where + " random range '" + key + "'");
      }
    }
    job.random = s;
  }
  if (j.contains("grid")) job.grid = parse_grid(j["grid"], where + " grid");
  if (!j.contains("suites") || !j["suites"].is_array()) throw ConfigError(where + ": 'suites' must be a list");
  for (const auto& s : j["suites"]) {
    try {
      job.suites.push_back(suite_from_string(s.get<std::string>()));
    } catch (const InvalidParameter& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  if (j.contains("policy")) job.policy = parse_policy(j["policy"], where + " policy");
  job.expect = j.value("expect", job.expect);
  job.chain_samples = j.value("chain_samples", job.chain_samples);
  if (j.contains("zero_interval")) job.zero_interval = number_pair(j["zero_interval"], where + " zero_interval");
  if (j.contains("plot")) {
    for (const auto& q : j["plot"]) {
      try {
        job.plot.push_back(grid_quantity_from_string(q.get<std::string>()));
      } catch (const InvalidParameter& e) {
        throw ConfigError(where + ": " + e.what());
      }
    }
  }
  return job;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  RunConfig config;
  try {
    const json doc = json::parse(json_text);
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    reject_unknown(doc, {"jobs", "threads"}, "configuration");
    config.threads = doc.value("threads", 1);
    if (doc.contains("jobs")) {
      if (!doc["jobs"].is_array()) throw ConfigError("'jobs' must be a list");
      for (const auto& j : doc["jobs"]) config.jobs.push_back(parse_job(j));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void apply_environment(RunConfig& config) {
  const char* raw = std::getenv("SOSZ_MAX_TERMS");
  if (raw == nullptr || *raw == '\0') return;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 1 || v > 100000000) {
    throw ConfigError(std::string("SOSZ_MAX_TERMS must be a positive integer, got '") + raw + "'");
  }
  for (JobConfig& job : config.jobs) job.policy.max_terms = static_cast<int>(v);
  config.validate();
}

// ---------------------------------------------------------------------------
// Suites

namespace {

std::string identity_tag(const FunctionFamily& f, int order) {
  switch (f.kind()) {
    case FamilyKind::SinCos: return order == 0 ? (f.is_sine() ? "Eq2_1" : "Eq2_2") : (order == 1 ? "Eq2_3" : "Eq2_4");
    case FamilyKind::Bessel: return order == 0 ? "Eq3_8" : (order == 1 ? "Eq3_11" : "Eq3_12");
    case FamilyKind::Hyp0F1: return order == 0 ? "Eq3_18" : (order == 1 ? "Eq3_19" : "Eq3_20");
    case FamilyKind::Laguerre: return order == 0 ? "Eq4_6" : (order == 1 ? "Eq4_9" : "Eq4_10");
    case FamilyKind::Hyp1F1: return order == 0 ? "Eq4_14" : (order == 1 ? "Eq4_15" : "Eq4_16");
    case FamilyKind::Jacobi: return "Eq5_9";
    case FamilyKind::Hyp2F1: return "Eq5_8";
  }
  return "unknown";
}

// Ranges where every expansion coefficient is asserted nonnegative.
bool nonnegativity_asserted(const FunctionFamily& f, int order) {
  const auto& p = f.params();
  switch (f.kind()) {
    case FamilyKind::SinCos: return true;
    case FamilyKind::Bessel: return order == 0 ? p[0] > -1.0 : p[0] >= -1.0;
    case FamilyKind::Hyp0F1: return order == 0 ? p[0] > 0.0 : p[0] > -1.0;
    case FamilyKind::Laguerre: return order == 0 ? p[1] > -1.0 : p[1] > -2.0;
    case FamilyKind::Jacobi: return p[1] > -1.0 && p[2] > -1.0;
    case FamilyKind::Hyp1F1:
    case FamilyKind::Hyp2F1: return false;
  }
  return false;
}

template <typename Fn>
void for_grid(const GridSpec& g, Fn&& fn) {
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) fn(ComplexPoint(g.x(i), g.y(j)));
  }
}

void run_identities(JobReport& r, const FunctionFamily& f, const GridSpec& g, const TruncationPolicy& policy) {
  for (int order = 0; order <= 2; ++order) {
    if (!sos_available(f, order)) continue;
    IdentityResult id;
    id.order = order;
    id.floor = order == 0 ? 1e-12 : 1e-8;
    id.tolerance = order == 0 ? 1e-9 : 1e-5;
    NonnegativityResult nn;
    nn.order = order;
    const bool check_terms = nonnegativity_asserted(f, order);
    double sum = 0.0;
    for_grid(g, [&](ComplexPoint z) {
      ++id.points;
      try {
        const SosExpansion e = sos_expand(f, z, order, policy);
        const double d = direct_counterpart(e, z, DerivativeRoute::FiniteDifference, policy);
        const double res = std::abs(e.total - d) / (std::abs(d) + id.floor);
        if (!e.converged || !std::isfinite(res)) {
          ++id.failures;
        } else {
          id.max_residual = std::max(id.max_residual, res);
          sum += res;
        }
        if (check_terms) {
          ++nn.points;
          for (const SosTerm& t : e.terms) {
            ++nn.terms_checked;
            if (t.coefficient < 0.0) ++nn.negative;
            nn.min_coefficient = nn.terms_checked == 1 ? t.coefficient : std::min(nn.min_coefficient, t.coefficient);
          }
        }
      } catch (const std::exception&) {
        ++id.failures;
      }
    });
    const int ok = id.points - id.failures;
    id.mean_residual = ok > 0 ? sum / ok : 0.0;
    id.passed = id.failures == 0 && id.max_residual <= id.tolerance;
    const std::string tag = identity_tag(f, order);
    r.identities[tag] = id;
    if (check_terms) {
      nn.passed = nn.negative == 0;
      r.nonnegativity[tag] = nn;
    }
  }
}

double rel_diff(Complex a, Complex b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// max over the grid of rel_diff(lhs(z), rhs(z)).
template <typename L, typename R>
double grid_max_rel(const GridSpec& g, L&& lhs, R&& rhs) {
  double worst = 0.0;
  for_grid(g, [&](ComplexPoint z) { worst = std::max(worst, rel_diff(lhs(z), rhs(z))); });
  return worst;
}

// max |lhs - rhs| / max |lhs| over the grid. Used where the compared
// functions vanish at grid points and only differ by O(epsilon).
template <typename L, typename R>
double grid_sup_rel(const GridSpec& g, L&& lhs, R&& rhs) {
  double diff = 0.0, scale = 0.0;
  for_grid(g, [&](ComplexPoint z) {
    const Complex a = lhs(z);
    diff = std::max(diff, std::abs(a - rhs(z)));
    scale = std::max(scale, std::abs(a));
  });
  return scale == 0.0 ? diff : diff / scale;
}

CheckResult check(double value, double tolerance, std::string detail, bool advisory = false) {
  CheckResult c;
  c.value = value;
  c.tolerance = tolerance;
  c.passed = std::isfinite(value) && value <= tolerance;
  c.advisory = advisory;
  c.detail = std::move(detail);
  return c;
}

// z^{2k} 2^{1-2k} (-1)^k / (k! (k-1)!), k >= 1: the alpha = -1 member of the
// defining series, whose k = 0 term vanishes.
Complex bessel_minus_one_series(Complex z, const TruncationPolicy& policy) {
  const Complex w = -z * z / 4.0;
  Complex term = 2.0 * w;  // k = 1
  Complex sum = term;
  int small = 0;
  for (int k = 2; k < policy.max_terms; ++k) {
    term *= w / (static_cast<double>(k) * (k - 1));
    sum += term;
    small = std::abs(term) <= policy.rel_tol * std::abs(sum) ? small + 1 : 0;
    if (small >= policy.consecutive_small) break;
  }
  return sum;
}

void run_limit_checks(JobReport& r, const FunctionFamily& f, const GridSpec& g, const TruncationPolicy& policy) {
  if (f.kind() == FamilyKind::Bessel && f.param(0) == -1.0) {
    r.checks["limit_alpha_minus_one"] =
        check(grid_max_rel(
                  g, [&](ComplexPoint z) { return calJ(-1.0, z, policy).value; },
                  [&](ComplexPoint z) { return bessel_minus_one_series(z.value(), policy); }),
              1e-12, "alpha = -1 against the defining series");
    r.checks["limit_alpha_minus_one_epsilon"] =
        check(grid_sup_rel(
                  g, [&](ComplexPoint z) { return calJ(-1.0, z, policy).value; },
                  [&](ComplexPoint z) { return calJ(-1.0 + 1e-6, z, policy).value; }),
              1e-4, "alpha = -1 against alpha = -1 + 1e-6, sup-norm relative");
    r.checks["limit_alpha_minus_one_as_minus_calJ1"] =
        check(grid_max_rel(
                  g, [&](ComplexPoint z) { return calJ(-1.0, z, policy).value; },
                  [&](ComplexPoint z) { return -calJ(1.0, z, policy).value; }),
              1e-12, "the limit equals -z^2 calJ_1(z), not -calJ_1(z)", true);
  }
  if (f.kind() == FamilyKind::Hyp0F1 && f.normalization() == Normalization::CTimesCPlusOne &&
      (f.param(0) == 0.0 || f.param(0) == -1.0)) {
    const double c = f.param(0);
    const std::string name = c == 0.0 ? "limit_c_zero" : "limit_c_minus_one";
    auto limit = [&](ComplexPoint z) { return hyp0f1_normalized(c, z.value(), policy).value; };
    auto closed = [&](ComplexPoint z) {
      const Complex w = z.value();
      return c == 0.0 ? w * hyp0f1(2.0, w, policy).value : w * w * hyp0f1(3.0, w, policy).value / 2.0;
    };
    auto epsilon = [&](ComplexPoint z) {
      const double ce = c + 1e-6;
      return ce * (ce + 1.0) * hyp0f1(ce, z.value(), policy).value;
    };
    r.checks[name + "_closed_form"] = check(
        grid_max_rel(g, limit, closed), 1e-12, c == 0.0 ? "against z 0F1(; 2; z)" : "against z^2 0F1(; 3; z) / 2");
    r.checks[name + "_epsilon"] = check(grid_sup_rel(g, limit, epsilon), 1e-4, "against c + 1e-6, sup-norm relative");
  }
  if (f.kind() == FamilyKind::Bessel && f.param(0) > -1.0 && f.param(0) != -0.5) {
    double worst = 0.0;
    bool positive = true;
    for (int n = 2; n <= 10; ++n) {
      for (double t : {0.0, 0.01, 0.25, 1.0, 4.0, 25.0, 100.0}) {
        const auto d = bessel_coefficient_decomposition(n, f.param(0), t);
        worst = std::max(worst, std::abs(d.direct - d.decomposed) / std::abs(d.decomposed));
        positive = positive && d.terms_positive && d.decomposed > 0.0;
      }
    }
    CheckResult c = check(worst, 1e-9, "coefficient decomposition, n = 2..10");
    c.passed = c.passed && positive;
    if (!positive) c.detail += "; a decomposition term is not positive";
    r.checks["Eq3_9"] = c;
  }
}

// Deterministic sample points: a sunflower spiral inside |z| <= radius.
std::vector<ComplexPoint> spiral(int count, double radius) {
  std::vector<ComplexPoint> out;
  const double golden = 2.399963229728653;
  for (int k = 0; k < count; ++k) {
    const double r = radius * std::sqrt((k + 0.5) / count);
    out.emplace_back(r * std::cos(golden * k), r * std::sin(golden * k));
  }
  return out;
}

struct ChainPlan {
  ChainId id;
  bool disk;
  // Index shift cycled over the samples.
  std::vector<int> shifts;
};

std::vector<ChainPlan> chain_plans(const FunctionFamily& f, ChainParams& base) {
  const auto& p = f.params();
  switch (f.kind()) {
    case FamilyKind::Bessel:
      base.alpha = p[0];
      return {{ChainId::Eq3_4, false, {0}}, {ChainId::Eq3_5, false, {0, 1, 2}}, {ChainId::Eq3_6, false, {0}}};
    case FamilyKind::Hyp0F1:
      base.c = p[0];
      return {{ChainId::Eq3_15, false, {0}}, {ChainId::Eq3_16, false, {0, 1, 2}}, {ChainId::Eq3_17, false, {0}}};
    case FamilyKind::Laguerre: {
      base.n = f.degree();
      base.alpha = p[1];
      std::vector<int> ks;
      for (int k = 0; k <= base.n; ++k) ks.push_back(k);
      return {{ChainId::Eq4_3, false, ks}, {ChainId::Eq4_4, false, {0}}, {ChainId::Eq4_5, false, {0}}};
    }
    case FamilyKind::Hyp1F1:
      base.a = p[0];
      base.c = p[1];
      return {{ChainId::Eq4_13, false, {0}}};
    case FamilyKind::Jacobi:
    case FamilyKind::Hyp2F1:
      if (f.kind() == FamilyKind::Jacobi) {
        base.a = -p[0];
        base.b = p[0] + p[1] + p[2] + 1.0;
        base.c = p[1] + 1.0;
      } else {
        base.a = p[0];
        base.b = p[1];
        base.c = p[2];
      }
      return {{ChainId::Eq5_3, true, {0}},
              {ChainId::Eq5_4, true, {0, 1, 2}},
              {ChainId::Eq5_5, true, {0}},
              {ChainId::Eq5_6, true, {0}},
              {ChainId::Eq5_7, true, {0}}};
    case FamilyKind::SinCos: break;
  }
  return {};
}

void run_chains(JobReport& r, const FunctionFamily& f, int samples, const TruncationPolicy& policy) {
  ChainParams base;
  const auto plans = chain_plans(f, base);
  const auto wide = spiral(samples, 4.0);
  const auto disk = spiral(samples, 0.38);
  for (const ChainPlan& plan : plans) {
    ChainParams probe = base;
    probe.k = plan.shifts.front();
    try {
      chain_check(plan.id, probe, ComplexPoint(0.1, 0.1), policy);
    } catch (const InvalidParameter&) {
      // Outside the identity's parameter range.
      continue;
    }
    ChainResult c;
    const auto& points = plan.disk ? disk : wide;
    for (int s = 0; s < samples; ++s) {
      ChainParams cp = base;
      cp.k = plan.shifts[static_cast<std::size_t>(s) % plan.shifts.size()];
      ++c.samples;
      try {
        const ChainResidual res = chain_check(plan.id, cp, points[s], policy);
        if (!res.converged || !std::isfinite(res.residual)) {
          ++c.failures;
          continue;
        }
        c.max_residual = std::max(c.max_residual, res.residual);
        if (res.finite) {
          if (res.residual > 1e-9) c.passed = false;
        } else {
          c.finite = false;
          const double ratio = res.residual / (10.0 * res.error_estimate);
          c.max_ratio = std::max(c.max_ratio, ratio);
          if (!(ratio <= 1.0)) c.passed = false;
        }
      } catch (const InvalidParameter&) {
        ++c.failures;
      }
    }
    c.passed = c.passed && c.failures == 0;
    r.chains[to_string(plan.id)] = c;
  }
}

}  // namespace

JobReport run_member(const JobConfig& job, const FunctionFamily& family) {
  const auto t0 = std::chrono::steady_clock::now();
  JobReport r;
  r.name = job.name;
  r.source_job = job.name;
  r.family = family.describe();
  r.kind = family.kind();
  r.params = family.params();
  r.normalization = family.normalization();
  r.grid = job.grid ? *job.grid : default_grid(family);
  r.policy = job.policy;
  r.suites = job.suites;
  if (job.random) r.seed = job.random->seed;
  r.expect = job.expect;
  const TruncationPolicy& policy = job.policy;

  for (Suite s : job.suites) {
    try {
      switch (s) {
        case Suite::Identities:
          run_identities(r, family, r.grid, policy);
          run_limit_checks(r, family, r.grid, policy);
          break;
        case Suite::Chains:
          run_chains(r, family, job.chain_samples, policy);
          break;
        case Suite::Inequalities: {
          InequalityOptions o;
          o.policy = policy;
          for (InequalityId id : inequalities_for(family)) {
            r.inequalities[to_string(id)] = sos_lower_bound_check(id, family, r.grid, o);
          }
          break;
        }
        case Suite::Jensen: {
          JensenOptions o;
          o.policy = policy;
          r.jensen = jensen_scan(family, r.grid, o);
          break;
        }
        case Suite::Zeros: {
          ZeroResult z;
          if (family.is_polynomial()) {
            JensenOptions o;
            o.policy = policy;
            const ZeroCount zc = count_real_zeros_vs_degree(family, o);
            z.zeros = zc.zeros;
            z.degree = zc.degree;
            z.count = zc.count;
            z.certificate = zc.certificate;
          } else {
            z.zeros = find_real_zeros(family, job.zero_interval.first, job.zero_interval.second, 4001,
                                      1e-13, policy);
            z.count = z.zeros.count_with_multiplicity();
          }
          r.zeros = z;
          break;
        }
        case Suite::Interlacing: {
          InterlacingResult il;
          const double a = family.param(0);
          il.first = find_real_zeros(family, job.zero_interval.first, job.zero_interval.second, 4001, 1e-13, policy);
          il.second = find_real_zeros(FunctionFamily::bessel(a + 1.0), job.zero_interval.first,
                                      job.zero_interval.second, 4001, 1e-13, policy);
          il.passed = interlacing_check(il.first, il.second);
          r.interlacing = il;
          break;
        }
      }
    } catch (const std::exception& e) {
      r.errors.push_back(to_string(s) + ": " + e.what());
    }
  }
  for (GridQuantity q : job.plot) {
    try {
      GridData d;
      d.grid = r.grid;
      d.values.reserve(r.grid.size());
      for_grid(r.grid, [&](ComplexPoint z) { d.values.push_back(grid_quantity(family, q, z, policy)); });
      r.grids[to_string(q)] = std::move(d);
    } catch (const std::exception& e) {
      r.errors.push_back("plot " + to_string(q) + ": " + e.what());
    }
  }

  bool violated = false;
  bool inconclusive = false;
  auto certificate = [&](const Certificate& c) {
    violated = violated || c.status == CertificateStatus::Violated;
    inconclusive = inconclusive || c.status == CertificateStatus::Inconclusive;
  };
  for (const auto& [_, v] : r.identities) violated = violated || !v.passed;
  for (const auto& [_, v] : r.nonnegativity) violated = violated || !v.passed;
  for (const auto& [_, v] : r.checks) violated = violated || (!v.passed && !v.advisory);
  for (const auto& [_, v] : r.chains) violated = violated || !v.passed;
  for (const auto& [_, v] : r.inequalities) certificate(v);
  if (r.jensen) certificate(*r.jensen);
  if (r.zeros && r.zeros->certificate) certificate(*r.zeros->certificate);
  if (r.interlacing) violated = violated || !r.interlacing->passed;
  if (violated) {
    r.outcome = Outcome::Violated;
  } else if (!r.errors.empty()) {
    r.outcome = Outcome::Error;
  } else if (inconclusive) {
    r.outcome = Outcome::Inconclusive;
  } else {
    r.outcome = Outcome::Passed;
  }
  r.passed = job.expect == "violated" ? r.outcome == Outcome::Violated : r.outcome == Outcome::Passed;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

VerificationReport run_suite(const RunConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  struct Task {
    const JobConfig* job;
    FunctionFamily family;
    std::string name;
  };
  std::vector<Task> tasks;
  for (const JobConfig& job : config.jobs) {
    const auto members = job.members();
    for (std::size_t i = 0; i < members.size(); ++i) {
      tasks.push_back({&job, members[i], members.size() == 1 ? job.name : job.name + "[" + std::to_string(i) + "]"});
    }
  }
  VerificationReport report;
  report.jobs.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      report.jobs[i] = run_member(*tasks[i].job, tasks[i].family);
      report.jobs[i].name = tasks[i].name;
    }
  };
  const int workers = std::max(1, std::min<int>(config.threads, static_cast<int>(tasks.size())));
  std::vector<std::future<void>> pool;
  for (int w = 1; w < workers; ++w) pool.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : pool) f.get();
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

int exit_code(const VerificationReport& report) {
  for (const JobReport& j : report.jobs) {
    if (!j.passed) return 1;
  }
  return 0;
}

}  // namespace sosz
