#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hexatm/strategic.hpp"

namespace hexatm {

inline constexpr int kMinMissionDistance = 4;
inline constexpr double kDefaultIntruderEntryS = 30.0;

struct ScenarioConfig {
  std::uint64_t scenario_id = 0;
  std::vector<Mission> missions;  // ids 0..n-1 in canonical order
  int intruder_index = -1;        // -1: no intruder
  double intruder_entry_s = kDefaultIntruderEntryS;

  [[nodiscard]] bool has_intruder() const { return intruder_index >= 0; }
};

enum class ScenarioSet { Unperturbed, Recovery };

const char* to_string(ScenarioSet s);
std::optional<ScenarioSet> parse_scenario_set(const std::string& s);
/// Name of the rule that builds the set, recorded in output metadata.
const char* rule_name(ScenarioSet s);

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All outer-ring (origin, destination) pairs at least `min_distance` apart,
/// ascending by (origin, destination).
std::vector<Mission> valid_missions(const AirspaceConfig& cfg, int min_distance = kMinMissionDistance);

/// Every set of 4 missions with distinct origins, in canonical order.
std::vector<ScenarioConfig> gen_unperturbed(const AirspaceConfig& cfg);
/// Each unperturbed scenario once per choice of intruder.
std::vector<ScenarioConfig> gen_recovery(const AirspaceConfig& cfg, double entry_s = kDefaultIntruderEntryS);
std::vector<ScenarioConfig> generate(ScenarioSet set, const AirspaceConfig& cfg);

/// One pick per stratum of equal share of the input order. Throws
/// std::domain_error when k exceeds the input size.
std::vector<ScenarioConfig> sample(const std::vector<ScenarioConfig>& all, std::size_t k, std::uint64_t seed);

/// Throws DataError when a scenario breaks its invariants.
void validate_scenario(const ScenarioConfig& sc, const AirspaceConfig& cfg, std::size_t aircraft = 4);
/// Sorts missions by (origin, destination) and renumbers ids; the intruder follows its mission.
ScenarioConfig canonicalize(const ScenarioConfig& sc);

void write_scenarios_csv(std::ostream& out, const std::vector<ScenarioConfig>& scenarios);
/// Throws DataError on malformed rows.
std::vector<ScenarioConfig> read_scenarios_csv(std::istream& in, const AirspaceConfig& cfg);

}  // namespace hexatm
