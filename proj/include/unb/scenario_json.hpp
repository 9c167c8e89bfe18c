#pragma once

#include <string>

#include "unb/trial.hpp"

namespace unb {

/// Parses a scenario JSON document (see docs/scenario_schema.md). Unknown
/// keys and malformed values raise std::invalid_argument with the offending
/// key in the message.
Scenario scenario_from_json_text(const std::string& text, const std::string& id = "scenario");

Scenario scenario_from_file(const std::string& path);

}  // namespace unb
