#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hexatm/collab.hpp"
#include "hexatm/daa.hpp"
#include "hexatm/scenario.hpp"

namespace hexatm {

enum class Mode { DaaU, StrategicU, DaaRec, CollabRec, CollabU };

const char* to_string(Mode m);
std::optional<Mode> parse_mode(const std::string& s);
/// Maps a command-line method name (daa, strategic, collab, daa_rec, collab_rec).
std::optional<Mode> mode_from_method(const std::string& method);
bool is_recovery(Mode m);

struct EngineConfig {
  Mode mode = Mode::StrategicU;
  double dt_integration_s = 0.5;
  double dt_metric_s = 2.0;
  double timeout_s = 1000.0;
  double excursion_radius_m = 10400.0;
  double hmd_violation_m = 1219.2;
  double astm_los_m = 609.6;
  double capture_radius_m = 100.0;
  double intruder_retry_s = 40.0;
  DaaConfig daa;
  KinematicLimits limits;
  AirspaceConfig airspace;

  /// Throws std::domain_error on inconsistent values.
  void validate() const;
};

struct CpaRecord {
  int aircraft = 0;
  int other = -1;  // -1: never shared the sky with anyone
  double min_distance_m = 0.0;
  double t_s = 0.0;
  Vec2 own_position;
  Vec2 other_position;
};

struct Events {
  bool hmd_violation = false;
  bool astm_los = false;
  bool excursion = false;
  bool timeout = false;

  bool operator==(const Events&) const = default;
};

struct AircraftResult {
  int id = 0;
  Mission mission;
  bool intruder = false;
  bool entered = false;
  bool finished = false;
  double entry_time_s = 0.0;
  double flight_time_s = 0.0;  // finished: arrival - entry; otherwise time flown so far
  double flown_distance_m = 0.0;
  int plan_legs = -1;          // strategic plan legs, -1 without a plan
  int holds = 0;               // holding orbits flown
  CpaRecord cpa;
};

struct ScenarioResult {
  std::uint64_t scenario_id = 0;
  Mode mode = Mode::StrategicU;
  std::vector<AircraftResult> aircraft;
  std::optional<double> actual_hmd_m;  // empty when no two aircraft were ever airborne together
  double actual_hmd_t_s = 0.0;
  Events events;
  double end_time_s = 0.0;
  std::vector<std::string> anomalies;
};

struct TraceRow {
  double t_s = 0.0;
  int aircraft = 0;
  Vec2 position;
  double heading_deg = 0.0;
  std::string mode_tag;
  int cell = -1;
};

struct Trace {
  std::vector<TraceRow> rows;
  std::vector<std::vector<CellId>> plan;  // per aircraft, empty when not planned
  std::vector<Reservation> ledger;
};

/// Updates `events` from one metric sample.
void classify_events(const std::vector<double>& pair_distances, const std::vector<Vec2>& positions,
                     const EngineConfig& ec, Events& events);

/// Deterministic single-scenario simulation. `trace` is filled when non-null.
ScenarioResult run_scenario(const ScenarioConfig& sc, const EngineConfig& ec, Trace* trace = nullptr);

}  // namespace hexatm
