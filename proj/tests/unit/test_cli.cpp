#include <sstream>

#include "doctest.h"
#include "hcm/cli/config.hpp"
#include "hcm/cli/report.hpp"
#include "hcm/cli/runner.hpp"

using namespace hcm;
using namespace hcm::cli;

namespace {

const char* kTwo = R"(
scenarios:
  - name: b-shift
    engine: corrector
    seed: 3
    probes: 16
    fixture: {kind: tail_shift, profile: power_phase, coeff: 0.25, p: 2, q: 2, d: 1, k_in: 2}
  - name: a-exact
    engine: hur
    probes: 8
    fixture: {kind: exact_isometry, d: 1, k_in: 1, k_out: 2}
    hur_control: {kind: power_sum, coeff: 0.01, p: 3}
)";

int count_lines(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("config parsing") {
  const auto suite = parse_config(kTwo);
  REQUIRE(suite.scenarios.size() == 2);
  CHECK(suite.scenarios[0].name == "a-exact");
  CHECK(suite.scenarios[0].engine == Engine::Hur);
  CHECK(suite.scenarios[1].fixture.k_out == 3);

  CHECK(parse_config("scenarios: []\n").scenarios.empty());
  CHECK_THROWS_AS(parse_config("scenarios: [{name: x, engine: warp}]"), ConfigError);
  CHECK_THROWS_AS(parse_config("scenarios: [{name: x, colour: red}]"), ConfigError);
  CHECK_THROWS_AS(parse_config("scenarios: [{name: x}, {name: x}]"), ConfigError);
  CHECK_THROWS_AS(parse_config("scenarios: [{engine: hur}]"), ConfigError);
  CHECK_THROWS_AS(parse_config("scenarios: {"), ConfigError);
  CHECK_THROWS_AS(parse_config("scenarios: [{name: x, probes: -3}]"), ConfigError);
  CHECK_THROWS_AS(parse_config("scenarios: [{name: x, domain: {kind: ball_product, c: 0.5}}]"),
                  ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/suite.yaml"), ConfigError);
}

TEST_CASE("config digest") {
  const auto a = parse_config(kTwo).scenarios[1];
  const auto b = parse_config(kTwo).scenarios[1];
  CHECK(a.digest() == b.digest());
  CHECK(a.digest().size() == 64);
  auto c = a;
  c.seed = 4;
  CHECK(c.digest() != a.digest());
  Overrides o;
  o.seed = 4;
  auto d = a;
  apply(o, d);
  CHECK(d.digest() == c.digest());
}

TEST_CASE("suite run and rendering") {
  const auto suite = parse_config(kTwo);
  const auto reports = run_suite(suite.scenarios, 2);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].scenario == "a-exact");
  CHECK(reports[1].scenario == "b-shift");
  for (const auto& r : reports) {
    CHECK_FALSE(r.error.has_value());
    CHECK(all_ok(r.certificates));
  }
  CHECK(exit_code(reports) == kAllPass);
  CHECK(exit_code({}) == kAllPass);

  const auto j = nlohmann::json::parse(render_json(reports));
  CHECK(j["summary"]["scenarios"] == 2);
  CHECK(j["summary"]["passed"] == 2);
  CHECK(j["scenarios"][1]["config_digest"] == suite.scenarios[1].digest());
  CHECK(render_json(reports) == render_json(run_suite(suite.scenarios, 1)));

  const auto csv = render_csv(reports);
  std::size_t rows = reports[0].certificates.size() + reports[1].certificates.size();
  CHECK(count_lines(csv) == static_cast<int>(rows) + 1);
  CHECK(csv.rfind("scenario,engine,id,", 0) == 0);
}

TEST_CASE("exit codes") {
  ScenarioReport pass{"a", "corrector", 1, "", {Certificate{"x", "", 0, 1, 1, Status::Pass}}, {}};
  ScenarioReport fail = pass;
  fail.certificates[0].status = Status::Fail;
  ScenarioReport indet = pass;
  indet.certificates[0].status = Status::Indeterminate;
  ScenarioReport err = pass;
  err.error = "boom";
  CHECK(exit_code({pass}) == kAllPass);
  CHECK(exit_code({pass, fail}) == kCertificateFailure);
  CHECK(exit_code({indet}) == kCertificateFailure);
  CHECK(exit_code({fail, err}) == kEngineError);

  const auto csv = render_csv({err});
  CHECK(csv.find(",error,") != std::string::npos);
}

TEST_CASE("engine errors do not throw") {
  const auto suite = parse_config(R"(
scenarios:
  - name: p-two
    engine: hur
    fixture: {kind: exact_isometry}
    hur_control: {kind: power_sum, coeff: 0.01, p: 2}
)");
  const auto r = run_scenario(suite.scenarios[0]);
  CHECK(r.error.has_value());
  CHECK(exit_code({r}) == kEngineError);
}
