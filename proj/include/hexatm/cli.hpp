#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hexatm/engine.hpp"

namespace hexatm::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kAnomalies = 3 };

/// Entry point shared by the `hexatm` binary and the tests. `args` excludes
/// the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string sha256_hex(std::string_view data);

nlohmann::json config_json(const EngineConfig& ec);
nlohmann::json result_json(const ScenarioResult& r, const AirspaceConfig& cfg);
/// Inverse of result_json for the fields the metrics need.
ScenarioResult result_from_json(const nlohmann::json& j);

}  // namespace hexatm::cli
