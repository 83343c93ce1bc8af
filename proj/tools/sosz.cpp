#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sosz/report.hpp"

namespace {

using namespace sosz;

// "alpha=0.5,n=2" -> {"alpha": [0.5], "n": [2]}
std::map<std::string, std::vector<double>> parse_params(const std::string& text) {
  std::map<std::string, std::vector<double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("parameter '" + item + "' is not key=value");
    try {
      std::size_t used = 0;
      const std::string value = item.substr(eq + 1);
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      out[item.substr(0, eq)] = {v};
    } catch (const std::logic_error&) {
      throw ConfigError("parameter '" + item + "' has no numeric value");
    }
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& text, std::size_t count, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ConfigError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != count) throw ConfigError(std::string(what) + ": expected " + std::to_string(count) + " values");
  return out;
}

FunctionFamily single_family(const std::string& kind, const std::string& params, const std::string& norm) {
  JobConfig job;
  job.name = "cli";
  job.family = kind;
  job.params = parse_params(params);
  if (norm == "c(c+1)") {
    job.normalization = Normalization::CTimesCPlusOne;
  } else if (norm != "plain") {
    throw ConfigError("normalization must be 'plain' or 'c(c+1)'");
  }
  const auto members = job.members();
  return members.front();
}

void print_summary(const VerificationReport& report) {
  int failed = 0;
  for (const JobReport& j : report.jobs) {
    std::printf("%-4s %-36s %-12s expect=%-8s %.2fs\n", j.passed ? "ok" : "FAIL", j.name.c_str(),
                to_string(j.outcome).c_str(), j.expect.c_str(), j.seconds);
    for (const auto& e : j.errors) std::printf("       error: %s\n", e.c_str());
    failed += j.passed ? 0 : 1;
  }
  std::printf("%zu jobs, %d not as expected, %.2fs\n", report.jobs.size(), failed, report.seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-of-squares zero-reality verification"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", format = "json";
  int jobs = 0;
  double rel_tol = 0.0;
  int max_terms = 0;
  auto* verify = app.add_subcommand("verify", "Run the suites of a configuration");
  verify->add_option("--config", config_path, "Configuration JSON")->required();
  verify->add_option("--out", out_dir, "Output directory");
  verify->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--jobs", jobs, "Concurrent jobs")->check(CLI::PositiveNumber);
  verify->add_option("--policy.rel-tol", rel_tol, "Override the series stopping tolerance")
      ->check(CLI::PositiveNumber);
  verify->add_option("--policy.max-terms", max_terms, "Override the series term cap")
      ->check(CLI::PositiveNumber);

  std::string family, params, norm = "plain", interval = "0,20";
  int samples = 4001;
  auto* zeros = app.add_subcommand("zeros", "Real zeros of one family member");
  zeros->add_option("--family", family, "Family kind")->required();
  zeros->add_option("--params", params, "Parameters k=v,...");
  zeros->add_option("--normalization", norm, "plain or c(c+1)");
  zeros->add_option("--interval", interval, "a,b");
  zeros->add_option("--samples", samples, "Lattice points")->check(CLI::Range(2, 100000000));

  std::string quantity = "modsq", grid_text = "-5,5,-5,5,41,41", out_file;
  auto* grid = app.add_subcommand("grid", "Plot data of one quantity as x,y,value");
  grid->add_option("--family", family, "Family kind")->required();
  grid->add_option("--params", params, "Parameters k=v,...");
  grid->add_option("--normalization", norm, "plain or c(c+1)");
  grid->add_option("--quantity", quantity, "modsq, ydy or d2y")->check(CLI::IsMember({"modsq", "ydy", "d2y"}));
  grid->add_option("--grid", grid_text, "xmin,xmax,ymin,ymax,nx,ny");
  grid->add_option("--out", out_file, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      RunConfig config = load_config(config_path);
      apply_environment(config);
      for (JobConfig& j : config.jobs) {
        if (rel_tol > 0.0) j.policy.rel_tol = rel_tol;
        if (max_terms > 0) j.policy.max_terms = max_terms;
        if (format == "csv" && j.plot.empty()) j.plot = {GridQuantity::Modsq};
      }
      if (jobs > 0) config.threads = jobs;
      config.validate();
      const VerificationReport report = run_suite(config);
      emit_report(report, ReportFormat::Json, (std::filesystem::path(out_dir) / "report.json").string());
      if (format == "csv") emit_report(report, ReportFormat::Csv, out_dir);
      print_summary(report);
      return exit_code(report);
    }
    if (*zeros) {
      const FunctionFamily f = single_family(family, params, norm);
      const auto ab = parse_numbers(interval, 2, "--interval");
      if (!(ab[0] < ab[1])) throw ConfigError("--interval: requires a < b");
      const ZeroList z = find_real_zeros(f, ab[0], ab[1], samples);
      nlohmann::json list = nlohmann::json::array();
      for (const RealZero& r : z.zeros) {
        list.push_back({{"location", r.location},
                        {"residual", r.residual},
                        {"confirmed", r.confirmed},
                        {"multiplicity", r.multiplicity}});
      }
      const nlohmann::json doc = {{"family", f.describe()}, {"interval", ab}, {"zeros", list}};
      std::cout << doc.dump(2) << "\n";
      return 0;
    }
    if (*grid) {
      const FunctionFamily f = single_family(family, params, norm);
      const auto g = parse_numbers(grid_text, 6, "--grid");
      GridData d;
      d.grid = GridSpec{g[0], g[1], g[2], g[3], static_cast<int>(g[4]), static_cast<int>(g[5])};
      d.grid.validate();
      const GridQuantity q = grid_quantity_from_string(quantity);
      for (int j = 0; j < d.grid.ny; ++j) {
        for (int i = 0; i < d.grid.nx; ++i) {
          d.values.push_back(grid_quantity(f, q, ComplexPoint(d.grid.x(i), d.grid.y(j))));
        }
      }
      const std::string csv = grid_to_csv(d);
      if (out_file.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(out_file);
        if (!out || !(out << csv)) throw std::runtime_error("cannot write '" + out_file + "'");
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidParameter& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
