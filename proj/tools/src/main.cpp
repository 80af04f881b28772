#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hcm/cli/config.hpp"
#include "hcm/cli/report.hpp"
#include "hcm/cli/runner.hpp"

int main(int argc, char** argv) {
  using namespace hcm::cli;
  CLI::App app{"Runs stability certificate scenarios from a YAML suite"};
  std::string config_path;
  std::string scenario;
  std::string out_path;
  std::string format = "json";
  Overrides overrides;
  int jobs = 1;
  app.add_option("--config", config_path, "YAML suite file")->required();
  app.add_option("--scenario", scenario, "Run only the named scenario");
  app.add_option("--seed", overrides.seed, "Override every scenario seed");
  app.add_option("--out", out_path, "Write the report here instead of stdout");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol", overrides.tol, "Override the extrapolation tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iter", overrides.max_iter, "Override the iteration cap")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", jobs, "Scenarios run in parallel")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  SuiteConfig suite;
  try {
    suite = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  std::vector<ScenarioConfig> selected;
  for (auto& s : suite.scenarios) {
    if (!scenario.empty() && s.name != scenario) continue;
    apply(overrides, s);
    selected.push_back(s);
  }
  if (!scenario.empty() && selected.empty()) {
    std::cerr << "config error: no scenario named '" << scenario << "'\n";
    return kConfigError;
  }

  const auto reports = run_suite(selected, jobs);
  for (const auto& r : reports) {
    if (r.error) std::cerr << "scenario '" << r.scenario << "': " << *r.error << "\n";
  }
  const std::string body = format == "csv" ? render_csv(reports) : render_json(reports);
  if (out_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write '" << out_path << "'\n";
      return kConfigError;
    }
    out << body;
  }
  return exit_code(reports);
}
