#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hexatm/kinematics.hpp"
#include "hexatm/lattice.hpp"

namespace hexatm {

inline constexpr double kMetersPerNmi = 1852.0;
inline constexpr double kMetersPerFoot = 0.3048;

struct DaaConfig {
  double dthr_m = 1219.2;
  double lookahead_s = 110.0;
  double hold_s = 2.0;
  double band_step_deg = 1.0;
  double max_band_search_deg = 180.0;

  void validate() const;
};

/// 0.66 nmi maps to 4,000 ft (1219.2 m); other values convert at 1852 m/nmi.
double dthr_from_nmi(double nmi);

struct CpaPrediction {
  double t_cpa_s = 0.0;
  double miss_m = 0.0;
  std::optional<double> t_violation_s;
  double dthr_m = 0.0;
};

/// Straight-line closest approach over [0, horizon_s].
CpaPrediction predict_cpa(const AircraftState& own, const AircraftState& intruder, double horizon_s, double dthr_m);

struct Traffic {
  int id = 0;
  AircraftState state;
};

struct DaaAlert {
  int ownship = 0;
  int intruder = 0;
  double time_to_violation_s = 0.0;
  double predicted_miss_m = 0.0;
};

/// Alerts for `own` against every other active aircraft, soonest first.
std::vector<DaaAlert> detect(int own, std::span<const Traffic> all, const DaaConfig& cfg);

struct HeadingInterval {
  double from_deg = 0.0;  // counter-clockwise from from_deg to to_deg, in [0, 360)
  double to_deg = 0.0;
};

struct HeadingBands {
  std::vector<HeadingInterval> free;
  std::optional<double> cw_recovery;   // radians
  std::optional<double> ccw_recovery;  // radians
};

HeadingBands heading_bands(const AircraftState& own, std::span<const AircraftState> intruders, const DaaConfig& cfg);

enum class DaaMode { Cruise, Avoiding, Resuming };

struct DaaState {
  DaaMode mode = DaaMode::Cruise;
};

enum class DaaAction {
  Continue,  // keep the current guidance
  Avoid,     // fly `command`
  Resume,    // fly `command` toward the resume target
};

struct DaaDecision {
  DaaAction action = DaaAction::Continue;
  std::optional<GuidanceCommand> command;
  DaaState next;
  std::vector<DaaAlert> alerts;
  bool limited = false;  // resume deferred by traffic; hold `command` until the next pass
};

/// One pass of the avoid/resume loop: clockwise recovery first, then
/// counter-clockwise, else keep going; once alerts clear after avoiding,
/// steer toward `resume_point` once the whole turn there is clear of traffic.
DaaDecision daa_step(const DaaState& state, int own, std::span<const Traffic> all, const DaaConfig& cfg,
                     const Vec2& resume_point, const KinematicLimits& limits);

struct ResumeTarget {
  Vec2 point;
  int criterion = 3;   // 1: on path, 2: neighbor on path, 3: destination
  int path_index = -1; // strategic path index of the target cell, -1 for destination-direct
};

/// Picks where to rejoin after avoidance. `last_visited_index` is the highest
/// strategic-path index already flown through (-1 if none).
ResumeTarget resume_target(std::optional<CellId> current_cell, std::span<const CellId> strategic_path,
                           int last_visited_index, CellId destination, const AirspaceConfig& cfg);

}  // namespace hexatm
