#include "hcm/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace hcm::cli {
namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

nlohmann::json to_json(const std::vector<ScenarioReport>& reports) {
  using nlohmann::json;
  json scenarios = json::array();
  int passed = 0;
  int failed = 0;
  int errors = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    json certs = json::array();
    for (const auto& c : r.certificates) {
      certs.push_back({{"id", c.id},
                       {"anchor", c.anchor},
                       {"measured", number(c.measured)},
                       {"bound", number(c.bound)},
                       {"margin", number(c.margin)},
                       {"status", to_string(c.status)}});
      if (c.status == Status::Pass || c.status == Status::Fail) worst = std::min(worst, c.margin);
    }
    json s = {{"scenario", r.scenario},
              {"engine", r.engine},
              {"seed", r.seed},
              {"config_digest", r.config_digest},
              {"certificates", certs}};
    if (r.error) {
      s["error"] = *r.error;
      ++errors;
    } else if (all_ok(r.certificates)) {
      ++passed;
    } else {
      ++failed;
    }
    scenarios.push_back(std::move(s));
  }
  json summary = {{"scenarios", reports.size()},
                  {"passed", passed},
                  {"failed", failed},
                  {"errors", errors},
                  {"worst_margin", number(worst)}};
  return {{"scenarios", scenarios}, {"summary", summary}};
}

std::string render_json(const std::vector<ScenarioReport>& reports) {
  return to_json(reports).dump(2) + "\n";
}

std::string render_csv(const std::vector<ScenarioReport>& reports) {
  std::ostringstream out;
  out << "scenario,engine,id,anchor,measured,bound,margin,status,seed,config_digest\n";
  for (const auto& r : reports) {
    const std::string tail = "," + std::to_string(r.seed) + "," + r.config_digest + "\n";
    if (r.error) {
      out << csv_field(r.scenario) << "," << r.engine << ",error," << csv_field(*r.error)
          << ",,,,error" << tail;
    }
    for (const auto& c : r.certificates) {
      out << csv_field(r.scenario) << "," << r.engine << "," << csv_field(c.id) << ","
          << csv_field(c.anchor) << "," << csv_number(c.measured) << "," << csv_number(c.bound)
          << "," << csv_number(c.margin) << "," << to_string(c.status) << tail;
    }
  }
  return out.str();
}

}  // namespace hcm::cli
