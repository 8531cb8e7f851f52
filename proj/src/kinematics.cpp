#include "hexatm/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hexatm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEntryPositionTolerance = 0.5;
constexpr double kHeadingTolerance = 1e-6;

// Outward-first three-arc fly-by: outward psi, inward |theta| + 2 psi,
// outward psi, with equal straights of length `straight` on both sides.
struct TurnShape {
  double outward = 0.0;
  double straight = 0.0;
};

Pose advance_arc(const Pose& p, double radius, double signed_angle) {
  PathSegment seg{p, radius * std::abs(signed_angle), (signed_angle >= 0.0 ? 1.0 : -1.0) / radius};
  return seg.end();
}

// Straight length and total length for a given outward angle, in a frame where
// the cell centroid is the origin, entry is at (-A, 0) heading +x.
std::pair<double, double> shape_lengths(double theta, double psi, double half, double radius) {
  const double sense = theta > 0.0 ? 1.0 : -1.0;
  Pose p{{0.0, 0.0}, 0.0};
  p = advance_arc(p, radius, -sense * psi);
  p = advance_arc(p, radius, sense * (std::abs(theta) + 2.0 * psi));
  p = advance_arc(p, radius, -sense * psi);
  const Vec2 din{1.0, 0.0};
  const Vec2 dout = unit(theta);
  const Vec2 shifted = Vec2{-half, 0.0} + p.position;
  const double straight = -cross(dout, shifted) / cross(dout, din);
  return {straight, 2.0 * straight + radius * (std::abs(theta) + 4.0 * psi)};
}

TurnShape solve_turn_shape(double theta, double half, double radius) {
  const double spacing = 2.0 * half;
  if (std::abs(theta) < 1e-9) return {0.0, spacing};
  if (std::abs(std::abs(theta) - kPi) < 1e-9) {
    const double psi = kPi / 3.0;
    const double straight = (spacing - radius * (kPi + 4.0 * psi)) / 2.0;
    if (straight < 0.0) throw GuidanceError("reversal leg does not fit in cell");
    return {psi, straight};
  }
  // Scan for the first bracket where the path reaches the cell spacing.
  const double step = deg2rad(0.5);
  double lo = 0.0;
  auto [a0, l0] = shape_lengths(theta, 0.0, half, radius);
  if (a0 < 0.0 || l0 > spacing) throw GuidanceError("turn leg cannot match cell occupation");
  double hi = -1.0;
  for (double psi = step; psi <= kPi / 2.0 + 1e-12; psi += step) {
    auto [a, l] = shape_lengths(theta, psi, half, radius);
    if (a < 0.0) break;
    if (l >= spacing) {
      hi = psi;
      break;
    }
    lo = psi;
  }
  if (hi < 0.0) throw GuidanceError("turn leg cannot match cell occupation");
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (shape_lengths(theta, mid, half, radius).second < spacing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double psi = 0.5 * (lo + hi);
  return {psi, shape_lengths(theta, psi, half, radius).first};
}

int entry_direction(const Pose& entry, CellId cell, const AirspaceConfig& cfg) {
  for (int k = 0; k < 6; ++k) {
    if (std::abs(wrap_pi(entry.heading - direction_angle(k))) < kHeadingTolerance) {
      const Vec2 expected = centroid(cell, cfg) - unit(direction_angle(k)) * cfg.apothem_m();
      if (distance(expected, entry.position) <= kEntryPositionTolerance) return k;
      break;
    }
  }
  throw GuidanceError("entry pose is not an edge midpoint of cell " + std::to_string(cell.index));
}

void require_contained(const Path& path, CellId cell, const AirspaceConfig& cfg) {
  if (!path_contained(path, cell, cfg)) {
    throw GuidanceError("leg leaves cell " + std::to_string(cell.index));
  }
}

CellLeg plan_hold(const Pose& entry, CellId cell, const AirspaceConfig& cfg, const KinematicLimits& limits) {
  const double radius = limits.turn_radius_m();
  const double spacing = cfg.centroid_spacing_m;
  Path path(entry);
  const double side = (spacing - 2.0 * kPi * radius) / 2.0;
  if (side >= 0.0) {
    // clockwise racetrack
    path.append_straight(side);
    path.append_arc(radius, -kPi);
    path.append_straight(side);
    path.append_arc(radius, -kPi);
  } else {
    path.append_arc(spacing / (2.0 * kPi), -2.0 * kPi);
  }
  require_contained(path, cell, cfg);
  return {LegKind::Hold, cell, cell, std::move(path), spacing / limits.speed_mps};
}

}  // namespace

void KinematicLimits::validate() const {
  if (!(speed_mps > 0.0)) throw std::domain_error("speed_mps must be positive");
  if (!(turn_rate_radps > 0.0)) throw std::domain_error("turn_rate_radps must be positive");
}

Pose PathSegment::at(double s) const {
  if (curvature == 0.0) return {start.position + unit(start.heading) * s, start.heading};
  const double h = start.heading + curvature * s;
  const Vec2 delta{(std::sin(h) - std::sin(start.heading)) / curvature,
                   -(std::cos(h) - std::cos(start.heading)) / curvature};
  return {start.position + delta, wrap_2pi(h)};
}

void Path::push(PathSegment seg) {
  offsets_.push_back(total_);
  total_ += seg.length_m;
  end_ = seg.end();
  segments_.push_back(seg);
}

void Path::append_straight(double length_m) {
  if (length_m <= 0.0) return;
  push({end_, length_m, 0.0});
}

void Path::append_arc(double radius_m, double signed_angle) {
  if (signed_angle == 0.0) return;
  push({end_, radius_m * std::abs(signed_angle), (signed_angle > 0.0 ? 1.0 : -1.0) / radius_m});
}

void Path::append(const Path& tail) {
  for (const auto& seg : tail.segments_) push({end_, seg.length_m, seg.curvature});
}

Pose Path::pose_at(double s) const {
  if (segments_.empty()) return {end_.position + unit(end_.heading) * s, end_.heading};
  if (s <= 0.0) return segments_.front().at(s);
  if (s >= total_) {
    return {end_.position + unit(end_.heading) * (s - total_), end_.heading};
  }
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), s);
  const std::size_t i = static_cast<std::size_t>(std::distance(offsets_.begin(), it)) - 1;
  return segments_[i].at(s - offsets_[i]);
}

Path Path::slice(double from_m, double to_m) const {
  from_m = std::clamp(from_m, 0.0, total_);
  to_m = std::clamp(to_m, from_m, total_);
  Path out(pose_at(from_m));
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const double a = std::max(offsets_[i], from_m);
    const double b = std::min(offsets_[i] + segments_[i].length_m, to_m);
    if (b - a <= 0.0) continue;
    out.push({out.end_, b - a, segments_[i].curvature});
  }
  return out;
}

double cell_time(const AirspaceConfig& cfg, const KinematicLimits& limits) {
  return cfg.centroid_spacing_m / limits.speed_mps;
}

AircraftState integrate(const AircraftState& state, const GuidanceCommand& cmd, double dt,
                        const KinematicLimits& limits) {
  AircraftState next = state;
  const double dist = state.speed_mps * dt;
  next.flown_distance_m += dist;

  if (const auto* leg = std::get_if<FollowLeg>(&cmd)) {
    const Pose p = leg->path->pose_at(leg->arc_m + dist);
    next.position = p.position;
    next.heading = p.heading;
    return next;
  }

  double straight_time = dt;
  if (const auto* turn = std::get_if<TurnToHeading>(&cmd)) {
    const double remaining = turn->sense == TurnSense::CCW ? wrap_2pi(turn->target - state.heading)
                                                          : wrap_2pi(state.heading - turn->target);
    const double turn_time = std::min(dt, remaining / limits.turn_rate_radps);
    if (turn_time > 0.0) {
      const double sign = turn->sense == TurnSense::CCW ? 1.0 : -1.0;
      const PathSegment arc{state.pose(), state.speed_mps * turn_time, sign * limits.turn_rate_radps / state.speed_mps};
      const Pose p = arc.end();
      next.position = p.position;
      next.heading = turn_time < dt ? wrap_2pi(turn->target) : p.heading;
      straight_time = dt - turn_time;
    }
  }
  next.position += unit(next.heading) * (state.speed_mps * straight_time);
  return next;
}

double hold_entry_offset_m(const AirspaceConfig& cfg, const KinematicLimits& limits) {
  const double offset = 1.25 * limits.turn_radius_m();
  const double half = cfg.apothem_m();
  for (const double deg : {60.0, 120.0, 180.0}) {
    if (solve_turn_shape(deg2rad(deg), half, limits.turn_radius_m()).straight < offset) {
      throw GuidanceError("turn legs leave no straight entry for a holding loop");
    }
  }
  return offset;
}

CellLeg plan_leg(const Pose& entry, CellId from_cell, CellId to_cell, const AirspaceConfig& cfg,
                 const KinematicLimits& limits) {
  if (from_cell == to_cell) return plan_hold(entry, from_cell, cfg, limits);

  const int exit_dir = direction_between(from_cell, to_cell, cfg);
  if (exit_dir < 0) throw GuidanceError("leg target is not adjacent");
  const int entry_dir = entry_direction(entry, from_cell, cfg);

  const double half = cfg.apothem_m();
  const double radius = limits.turn_radius_m();
  // Snap to a multiple of 60 degrees; +pi for reversal.
  int turn_steps = ((entry_dir - exit_dir) % 6 + 6) % 6;  // CCW steps
  if (turn_steps > 3) turn_steps -= 6;
  const double theta = turn_steps * kPi / 3.0;

  const TurnShape shape = solve_turn_shape(theta, half, radius);
  const Pose start{centroid(from_cell, cfg) - unit(direction_angle(entry_dir)) * half, direction_angle(entry_dir)};
  Path path(start);
  path.append_straight(shape.straight);
  if (turn_steps != 0) {
    const double sense = theta > 0.0 ? 1.0 : -1.0;
    path.append_arc(radius, -sense * shape.outward);
    path.append_arc(radius, sense * (std::abs(theta) + 2.0 * shape.outward));
    path.append_arc(radius, -sense * shape.outward);
    path.append_straight(shape.straight);
  }

  const Vec2 exit_point = centroid(from_cell, cfg) + unit(direction_angle(exit_dir)) * half;
  if (distance(path.end_pose().position, exit_point) > 1e-6 * cfg.centroid_spacing_m ||
      std::abs(wrap_pi(path.end_pose().heading - direction_angle(exit_dir))) > 1e-6) {
    throw GuidanceError("leg construction missed the exit border");
  }
  require_contained(path, from_cell, cfg);
  const double t = path.length() / limits.speed_mps;
  return {LegKind::Transit, from_cell, to_cell, std::move(path), t};
}

CellLeg plan_origin_leg(CellId origin, CellId to_cell, const AirspaceConfig& cfg, const KinematicLimits& limits) {
  const int dir = direction_between(origin, to_cell, cfg);
  if (dir < 0) throw GuidanceError("origin leg target is not adjacent");
  Path path(Pose{centroid(origin, cfg), direction_angle(dir)});
  path.append_straight(cfg.apothem_m());
  const double t = path.length() / limits.speed_mps;
  return {LegKind::Origin, origin, to_cell, std::move(path), t};
}

CellLeg plan_final_leg(const Pose& entry, CellId destination, const AirspaceConfig& cfg,
                       const KinematicLimits& limits) {
  const int dir = entry_direction(entry, destination, cfg);
  Path path(Pose{centroid(destination, cfg) - unit(direction_angle(dir)) * cfg.apothem_m(), direction_angle(dir)});
  path.append_straight(cfg.apothem_m());
  const double t = path.length() / limits.speed_mps;
  return {LegKind::Final, destination, destination, std::move(path), t};
}

bool path_contained(const Path& path, CellId cell, const AirspaceConfig& cfg, double step_m, double end_margin_m) {
  const double total = path.length();
  for (double s = end_margin_m; s <= total - end_margin_m; s += step_m) {
    const auto where = locate(path.pose_at(s).position, cfg);
    if (!where || *where != cell) return false;
  }
  return true;
}

GuidanceCommand direct_to(const AircraftState& state, const Vec2& target, const KinematicLimits& limits) {
  const Vec2 to_target = target - state.position;
  if (norm(to_target) < 1e-9) return HoldHeading{};
  const double desired = bearing(state.position, target);
  const double error = wrap_pi(desired - state.heading);
  if (std::abs(error) <= deg2rad(1.0)) return HoldHeading{};
  // An exact reversal resolves clockwise.
  const TurnSense sense = (error > 0.0 && error < std::numbers::pi) ? TurnSense::CCW : TurnSense::CW;
  // A target inside the turning circle cannot be reached by turning now.
  const double radius = limits.turn_radius_m();
  const Vec2 side = sense == TurnSense::CCW ? unit(state.heading + kPi / 2.0) : unit(state.heading - kPi / 2.0);
  if (distance(state.position + side * radius, target) < radius) return HoldHeading{};
  return TurnToHeading{wrap_2pi(desired), sense};
}

}  // namespace hexatm
