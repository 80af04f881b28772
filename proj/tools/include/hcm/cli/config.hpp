#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcm/asymptotics.hpp"
#include "hcm/controls.hpp"
#include "hcm/domains.hpp"
#include "hcm/fixtures.hpp"

namespace hcm::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Engine { Corrector, Hur, Asymptotics, Superstability, Uniqueness, Homogeneity, CrossValidate };
std::string to_string(Engine e);

struct ControlConfig {
  std::string kind = "power_product";  // power_product | power_sum
  double coeff = 0.25;
  double p = 2.0;
  double q = 2.0;

  ControlSpec build() const;
};

struct DomainConfig {
  std::string kind = "full";  // full | ball_product | exterior_product | exterior_union | ball_union
  double c = 2.0;
  double radius = 1.0;

  DomainSpec build() const;
};

struct FixtureConfig {
  std::string kind = "exact_isometry";  // exact_isometry | tail_shift | perturbed_isometry | homogeneous | asymptotic_decay
  std::string profile = "power_phase";  // tail_shift: power_phase | sum_phase | bounded | discontinuous
  double coeff = 0.25;
  double p = 2.0;
  double q = 2.0;
  double amplitude = 1.0;
  double cell = 0.25;
  double c = 2.0;                       // homogeneous
  std::string decay = "inverse_sqrt";   // asymptotic_decay: inverse_sqrt | inverse_log | sqrt_ratio
  int d = 1;
  int k_in = 1;
  int k_out = 2;
};

struct AsymptoticsConfig {
  double p = 0.5;
  std::string mode = "max_norm";  // max_norm | min_norm
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3};
  std::string thresholds = "estimated";  // estimated | analytic
};

struct ScenarioConfig {
  std::string name;
  Engine engine = Engine::Corrector;
  std::uint64_t seed = 1;
  int probes = 64;
  double probe_lo = 1e-2;
  double probe_hi = 1e2;
  FixtureConfig fixture;
  std::optional<ControlConfig> control;  // defaults to the fixture's declared control
  std::optional<DomainConfig> domain;    // defaults to the fixture's declared domain
  std::optional<ControlConfig> hur_control;
  double c_alt = 3.0;  // uniqueness
  AsymptoticsConfig asymptotics;
  double tol = 1e-10;
  double iso = 1e-8;
  double homogeneity_tol = 1e-12;
  int max_iter = 2000;

  FixtureSpec fixture_spec() const;
  nlohmann::json to_json() const;
  /// SHA-256 of the canonical JSON form.
  std::string digest() const;
};

struct SuiteConfig {
  std::vector<ScenarioConfig> scenarios;
};

/// Parses and validates a YAML suite. Throws ConfigError.
SuiteConfig load_config(const std::string& path);
SuiteConfig parse_config(const std::string& text);

}  // namespace hcm::cli
