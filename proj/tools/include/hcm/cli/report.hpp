#pragma once

#include <string>
#include <vector>

#include "hcm/cli/runner.hpp"
#include "json.hpp"

namespace hcm::cli {

nlohmann::json to_json(const std::vector<ScenarioReport>& reports);
/// Canonical JSON text: sorted keys, two-space indent, trailing newline.
std::string render_json(const std::vector<ScenarioReport>& reports);
/// One row per certificate; scenario errors become a row with status "error".
std::string render_csv(const std::vector<ScenarioReport>& reports);

}  // namespace hcm::cli
