#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hexatm/geometry.hpp"
#include "hexatm/lattice.hpp"

namespace hexatm {

struct KinematicLimits {
  double speed_mps = 44.4;
  double turn_rate_radps = deg2rad(6.5);

  void validate() const;
  [[nodiscard]] double turn_radius_m() const { return speed_mps / turn_rate_radps; }
};

struct Pose {
  Vec2 position;
  double heading = 0.0;  // radians, 0 = +x, counter-clockwise positive
};

struct AircraftState {
  Vec2 position;
  double heading = 0.0;
  double speed_mps = 0.0;
  double flown_distance_m = 0.0;
  bool active = false;

  [[nodiscard]] Pose pose() const { return {position, heading}; }
  [[nodiscard]] Vec2 velocity() const { return unit(heading) * speed_mps; }
};

/// Raised when a leg cannot be built within its cell at the configured limits.
class GuidanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Constant-curvature piece of a planar path. curvature > 0 turns left.
struct PathSegment {
  Pose start;
  double length_m = 0.0;
  double curvature = 0.0;

  [[nodiscard]] Pose at(double s) const;
  [[nodiscard]] Pose end() const { return at(length_m); }
};

// Tangent-continuous chain of straight and circular segments, arc-length
// parameterized. Past the end it extends straight along the final heading.
class Path {
 public:
  Path() = default;
  explicit Path(Pose start) : end_(start) {}

  void append_straight(double length_m);
  /// Signed angle: positive turns counter-clockwise.
  void append_arc(double radius_m, double signed_angle);
  void append(const Path& tail);

  [[nodiscard]] double length() const { return total_; }
  [[nodiscard]] Pose start_pose() const { return segments_.empty() ? end_ : segments_.front().start; }
  [[nodiscard]] Pose end_pose() const { return end_; }
  [[nodiscard]] Pose pose_at(double s) const;
  [[nodiscard]] Path slice(double from_m, double to_m) const;
  [[nodiscard]] const std::vector<PathSegment>& segments() const { return segments_; }
  [[nodiscard]] bool empty() const { return segments_.empty(); }

 private:
  void push(PathSegment seg);

  std::vector<PathSegment> segments_;
  std::vector<double> offsets_;
  double total_ = 0.0;
  Pose end_{};
};

enum class TurnSense { CW, CCW };

struct HoldHeading {};
struct TurnToHeading {
  double target = 0.0;
  TurnSense sense = TurnSense::CW;
};
struct FollowLeg {
  const Path* path = nullptr;  // not owned
  double arc_m = 0.0;          // arc position matching the current state
};

using GuidanceCommand = std::variant<HoldHeading, TurnToHeading, FollowLeg>;

enum class LegKind { Origin, Transit, Hold, Final };

struct CellLeg {
  LegKind kind = LegKind::Transit;
  CellId cell;
  CellId exit_to;
  Path path;
  double occupation_s = 0.0;
};

/// Advances the state by dt seconds under cmd. Speed is constant.
AircraftState integrate(const AircraftState& state, const GuidanceCommand& cmd, double dt,
                        const KinematicLimits& limits);

/// Straight-line occupation time of one cell.
double cell_time(const AirspaceConfig& cfg, const KinematicLimits& limits);

/// Leg through `from_cell` entering at an edge midpoint and leaving toward
/// `to_cell`, with in-cell length equal to the centroid spacing. When
/// to_cell == from_cell the leg is a holding loop of the same length flown from
/// `entry` and returning to it. Throws GuidanceError on infeasible geometry.
CellLeg plan_leg(const Pose& entry, CellId from_cell, CellId to_cell, const AirspaceConfig& cfg,
                 const KinematicLimits& limits);

/// From the centroid of `origin` straight to the border with `to_cell`.
CellLeg plan_origin_leg(CellId origin, CellId to_cell, const AirspaceConfig& cfg, const KinematicLimits& limits);

/// From the entry edge midpoint straight to the centroid of `destination`.
CellLeg plan_final_leg(const Pose& entry, CellId destination, const AirspaceConfig& cfg,
                       const KinematicLimits& limits);

/// Distance after cell entry at which a holding loop is inserted. Every
/// transit leg is straight up to at least this point.
double hold_entry_offset_m(const AirspaceConfig& cfg, const KinematicLimits& limits);

/// Checks that every interior sample of `path` locates in `cell`.
bool path_contained(const Path& path, CellId cell, const AirspaceConfig& cfg, double step_m = 10.0,
                    double end_margin_m = 1.0);

GuidanceCommand direct_to(const AircraftState& state, const Vec2& target, const KinematicLimits& limits);

}  // namespace hexatm
