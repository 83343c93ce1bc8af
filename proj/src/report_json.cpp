#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "sosz/report.hpp"

namespace sosz {

using nlohmann::json;

namespace {

// Non-finite values are stored as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double get_num(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

template <typename T, typename F>
json opt(const std::optional<T>& v, F&& f) {
  return v ? f(*v) : json(nullptr);
}

json grid_json(const GridSpec& g) {
  return {{"x_min", num(g.x_min)}, {"x_max", num(g.x_max)}, {"y_min", num(g.y_min)},
          {"y_max", num(g.y_max)}, {"nx", g.nx},            {"ny", g.ny}};
}
GridSpec grid_from(const json& j) {
  GridSpec g;
  g.x_min = get_num(j.at("x_min"));
  g.x_max = get_num(j.at("x_max"));
  g.y_min = get_num(j.at("y_min"));
  g.y_max = get_num(j.at("y_max"));
  g.nx = j.at("nx").get<int>();
  g.ny = j.at("ny").get<int>();
  return g;
}

json policy_json(const TruncationPolicy& p) {
  return {{"rel_tol", num(p.rel_tol)}, {"consecutive_small", p.consecutive_small}, {"max_terms", p.max_terms}};
}
TruncationPolicy policy_from(const json& j) {
  TruncationPolicy p;
  p.rel_tol = get_num(j.at("rel_tol"));
  p.consecutive_small = j.at("consecutive_small").get<int>();
  p.max_terms = j.at("max_terms").get<int>();
  return p;
}

json certificate_json(const Certificate& c) {
  return {{"status", to_string(c.status)},
          {"witness", opt(c.witness,
                          [](const Witness& w) {
                            return json{{"x", num(w.x)},
                                        {"y", num(w.y)},
                                        {"quantity", w.quantity},
                                        {"value", num(w.value)},
                                        {"tolerance", num(w.tolerance)}};
                          })},
          {"checks_run", c.checks_run},
          {"failures", c.failures},
          {"route", c.route},
          {"message", c.message}};
}
Certificate certificate_from(const json& j) {
  Certificate c;
  c.status = certificate_status_from_string(j.at("status").get<std::string>());
  if (!j.at("witness").is_null()) {
    const json& w = j["witness"];
    c.witness = Witness{get_num(w.at("x")), get_num(w.at("y")), w.at("quantity").get<std::string>(),
                        get_num(w.at("value")), get_num(w.at("tolerance"))};
  }
  c.checks_run = j.at("checks_run").get<int>();
  c.failures = j.at("failures").get<int>();
  c.route = j.at("route").get<std::string>();
  c.message = j.at("message").get<std::string>();
  return c;
}

json zeros_json(const ZeroList& z) {
  json list = json::array();
  for (const RealZero& r : z.zeros) {
    list.push_back({{"location", num(r.location)},
                    {"bracket_lo", num(r.bracket_lo)},
                    {"bracket_hi", num(r.bracket_hi)},
                    {"residual", num(r.residual)},
                    {"local_scale", num(r.local_scale)},
                    {"confirmed", r.confirmed},
                    {"multiplicity", r.multiplicity}});
  }
  return {{"zeros", list},
          {"interval", opt(z.interval, [](const auto& p) { return json{num(p.first), num(p.second)}; })}};
}
ZeroList zeros_from(const json& j) {
  ZeroList z;
  for (const json& r : j.at("zeros")) {
    RealZero rz;
    rz.location = get_num(r.at("location"));
    rz.bracket_lo = get_num(r.at("bracket_lo"));
    rz.bracket_hi = get_num(r.at("bracket_hi"));
    rz.residual = get_num(r.at("residual"));
    rz.local_scale = get_num(r.at("local_scale"));
    rz.confirmed = r.at("confirmed").get<bool>();
    rz.multiplicity = r.at("multiplicity").get<int>();
    z.zeros.push_back(rz);
  }
  if (!j.at("interval").is_null()) z.interval = std::make_pair(get_num(j["interval"][0]), get_num(j["interval"][1]));
  return z;
}

template <typename T, typename F>
json map_json(const std::map<std::string, T>& m, F&& f) {
  json out = json::object();
  for (const auto& [k, v] : m) out[k] = f(v);
  return out;
}
template <typename T, typename F>
std::map<std::string, T> map_from(const json& j, F&& f) {
  std::map<std::string, T> out;
  for (const auto& [k, v] : j.items()) out[k] = f(v);
  return out;
}

json job_json(const JobReport& r) {
  json suites = json::array();
  for (Suite s : r.suites) suites.push_back(to_string(s));
  json params = json::array();
  for (double p : r.params) params.push_back(num(p));
  return {
      {"name", r.name},
      {"source_job", r.source_job},
      {"family", r.family},
      {"kind", to_string(r.kind)},
      {"params", params},
      {"normalization", r.normalization == Normalization::Plain ? "plain" : "c(c+1)"},
      {"grid", grid_json(r.grid)},
      {"policy", policy_json(r.policy)},
      {"suites", suites},
      {"seed", opt(r.seed, [](unsigned long long s) { return json(s); })},
      {"expect", r.expect},
      {"outcome", to_string(r.outcome)},
      {"passed", r.passed},
      {"seconds", num(r.seconds)},
      {"identities", map_json(r.identities,
                              [](const IdentityResult& v) {
                                return json{{"order", v.order},
                                            {"points", v.points},
                                            {"failures", v.failures},
                                            {"max_residual", num(v.max_residual)},
                                            {"mean_residual", num(v.mean_residual)},
                                            {"tolerance", num(v.tolerance)},
                                            {"floor", num(v.floor)},
                                            {"passed", v.passed}};
                              })},
      {"nonnegativity", map_json(r.nonnegativity,
                                 [](const NonnegativityResult& v) {
                                   return json{{"order", v.order},
                                               {"points", v.points},
                                               {"terms_checked", v.terms_checked},
                                               {"negative", v.negative},
                                               {"min_coefficient", num(v.min_coefficient)},
                                               {"passed", v.passed}};
                                 })},
      {"checks", map_json(r.checks,
                          [](const CheckResult& v) {
                            return json{{"value", num(v.value)},
                                        {"tolerance", num(v.tolerance)},
                                        {"passed", v.passed},
                                        {"advisory", v.advisory},
                                        {"detail", v.detail}};
                          })},
      {"chains", map_json(r.chains,
                          [](const ChainResult& v) {
                            return json{{"samples", v.samples},
                                        {"failures", v.failures},
                                        {"max_residual", num(v.max_residual)},
                                        {"max_ratio", num(v.max_ratio)},
                                        {"finite", v.finite},
                                        {"passed", v.passed}};
                          })},
      {"inequalities", map_json(r.inequalities, certificate_json)},
      {"jensen", opt(r.jensen, certificate_json)},
      {"zeros", opt(r.zeros,
                    [](const ZeroResult& z) {
                      return json{{"zeros", zeros_json(z.zeros)},
                                  {"degree", opt(z.degree, [](int d) { return json(d); })},
                                  {"count", z.count},
                                  {"certificate", opt(z.certificate, certificate_json)}};
                    })},
      {"interlacing", opt(r.interlacing,
                          [](const InterlacingResult& il) {
                            return json{{"first", zeros_json(il.first)},
                                        {"second", zeros_json(il.second)},
                                        {"passed", il.passed}};
                          })},
      {"grids", map_json(r.grids,
                         [](const GridData& d) {
                           json values = json::array();
                           for (double v : d.values) values.push_back(num(v));
                           return json{{"grid", grid_json(d.grid)}, {"values", values}};
                         })},
      {"errors", r.errors},
  };
}

JobReport job_from(const json& j) {
  JobReport r;
  r.name = j.at("name").get<std::string>();
  r.source_job = j.at("source_job").get<std::string>();
  r.family = j.at("family").get<std::string>();
  r.kind = family_kind_from_string(j.at("kind").get<std::string>());
  for (const json& p : j.at("params")) r.params.push_back(get_num(p));
  r.normalization = j.at("normalization").get<std::string>() == "plain" ? Normalization::Plain
                                                                         : Normalization::CTimesCPlusOne;
  r.grid = grid_from(j.at("grid"));
  r.policy = policy_from(j.at("policy"));
  for (const json& s : j.at("suites")) r.suites.push_back(suite_from_string(s.get<std::string>()));
  if (!j.at("seed").is_null()) r.seed = j["seed"].get<unsigned long long>();
  r.expect = j.at("expect").get<std::string>();
  r.outcome = outcome_from_string(j.at("outcome").get<std::string>());
  r.passed = j.at("passed").get<bool>();
  r.seconds = get_num(j.at("seconds"));
  r.identities = map_from<IdentityResult>(j.at("identities"), [](const json& v) {
    IdentityResult x;
    x.order = v.at("order").get<int>();
    x.points = v.at("points").get<int>();
    x.failures = v.at("failures").get<int>();
    x.max_residual = get_num(v.at("max_residual"));
    x.mean_residual = get_num(v.at("mean_residual"));
    x.tolerance = get_num(v.at("tolerance"));
    x.floor = get_num(v.at("floor"));
    x.passed = v.at("passed").get<bool>();
    return x;
  });
  r.nonnegativity = map_from<NonnegativityResult>(j.at("nonnegativity"), [](const json& v) {
    NonnegativityResult x;
    x.order = v.at("order").get<int>();
    x.points = v.at("points").get<int>();
    x.terms_checked = v.at("terms_checked").get<long long>();
    x.negative = v.at("negative").get<long long>();
    x.min_coefficient = get_num(v.at("min_coefficient"));
    x.passed = v.at("passed").get<bool>();
    return x;
  });
  r.checks = map_from<CheckResult>(j.at("checks"), [](const json& v) {
    CheckResult x;
    x.value = get_num(v.at("value"));
    x.tolerance = get_num(v.at("tolerance"));
    x.passed = v.at("passed").get<bool>();
    x.advisory = v.at("advisory").get<bool>();
    x.detail = v.at("detail").get<std::string>();
    return x;
  });
  r.chains = map_from<ChainResult>(j.at("chains"), [](const json& v) {
    ChainResult x;
    x.samples = v.at("samples").get<int>();
    x.failures = v.at("failures").get<int>();
    x.max_residual = get_num(v.at("max_residual"));
    x.max_ratio = get_num(v.at("max_ratio"));
    x.finite = v.at("finite").get<bool>();
    x.passed = v.at("passed").get<bool>();
    return x;
  });
  r.inequalities = map_from<Certificate>(j.at("inequalities"), certificate_from);
  if (!j.at("jensen").is_null()) r.jensen = certificate_from(j["jensen"]);
  if (!j.at("zeros").is_null()) {
    const json& z = j["zeros"];
    ZeroResult x;
    x.zeros = zeros_from(z.at("zeros"));
    if (!z.at("degree").is_null()) x.degree = z["degree"].get<int>();
    x.count = z.at("count").get<int>();
    if (!z.at("certificate").is_null()) x.certificate = certificate_from(z["certificate"]);
    r.zeros = x;
  }
  if (!j.at("interlacing").is_null()) {
    const json& il = j["interlacing"];
    r.interlacing = InterlacingResult{zeros_from(il.at("first")), zeros_from(il.at("second")),
                                      il.at("passed").get<bool>()};
  }
  r.grids = map_from<GridData>(j.at("grids"), [](const json& v) {
    GridData d;
    d.grid = grid_from(v.at("grid"));
    for (const json& x : v.at("values")) d.values.push_back(get_num(x));
    return d;
  });
  r.errors = j.at("errors").get<std::vector<std::string>>();
  return r;
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char ch : name) {
    const bool keep = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.';
    out += keep ? ch : '_';
  }
  return out.empty() ? "job" : out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

std::string report_to_json(const VerificationReport& report, int indent) {
  json jobs = json::array();
  for (const JobReport& j : report.jobs) jobs.push_back(job_json(j));
  const json doc = {{"artifact", {{"name", "sosz"}, {"version", report.artifact_version}}},
                    {"jobs", jobs},
                    {"seconds", num(report.seconds)}};
  return doc.dump(indent) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    VerificationReport r;
    r.artifact_version = doc.at("artifact").at("version").get<std::string>();
    for (const json& j : doc.at("jobs")) r.jobs.push_back(job_from(j));
    r.seconds = get_num(doc.at("seconds"));
    return r;
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("malformed report: ") + e.what());
  }
}

std::string grid_to_csv(const GridData& data) {
  std::string out = "x,y,value\n";
  char buf[96];
  std::size_t k = 0;
  for (int j = 0; j < data.grid.ny; ++j) {
    for (int i = 0; i < data.grid.nx; ++i, ++k) {
      const double v = k < data.values.size() ? data.values[k] : std::numeric_limits<double>::quiet_NaN();
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", data.grid.x(i), data.grid.y(j), v);
      out += buf;
    }
  }
  return out;
}

void emit_report(const VerificationReport& report, ReportFormat format, const std::string& path) {
  if (format == ReportFormat::Json) {
    write_file(path, report_to_json(report));
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw std::runtime_error("cannot create directory '" + path + "': " + ec.message());
  for (const JobReport& j : report.jobs) {
    for (const auto& [quantity, data] : j.grids) {
      write_file(std::filesystem::path(path) / (sanitize(j.name) + "_" + quantity + ".csv"), grid_to_csv(data));
    }
  }
}

}  // namespace sosz
