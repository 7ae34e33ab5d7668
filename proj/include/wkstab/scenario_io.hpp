#pragma once

// JSON scenario files and report emitters. The schemas are documented in
// docs/scenario-schema.md and docs/report-schema.md.

#include <string>

#include "wkstab/scenario.hpp"

namespace wkstab {

// Throws InvalidInput with a field path such as "checks[2].regions[0].w".
Scenario parse_scenario(const std::string& text);

// "builtin:<id>" or a path to a JSON scenario file.
Scenario load_scenario(const std::string& source);

std::string serialize_scenario(const Scenario& scenario);

std::string report_json(const Report& report);
std::string report_text(const Report& report);

}  // namespace wkstab
