#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hcm/certificates.hpp"
#include "hcm/cli/config.hpp"

namespace hcm::cli {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> max_iter;
};

void apply(const Overrides& o, ScenarioConfig& s);

struct ScenarioReport {
  std::string scenario;
  std::string engine;
  std::uint64_t seed = 0;
  std::string config_digest;
  std::vector<Certificate> certificates;
  std::optional<std::string> error;  // engine error, if the scenario aborted
};

/// Never throws: engine failures land in `error`.
ScenarioReport run_scenario(const ScenarioConfig& s);

/// Runs the scenarios on up to `jobs` threads; output keeps the input order.
std::vector<ScenarioReport> run_suite(const std::vector<ScenarioConfig>& scenarios, int jobs);

enum ExitCode { kAllPass = 0, kCertificateFailure = 1, kConfigError = 2, kEngineError = 3 };

int exit_code(const std::vector<ScenarioReport>& reports);

}  // namespace hcm::cli
