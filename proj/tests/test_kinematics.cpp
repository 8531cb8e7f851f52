#include <cmath>
#include <random>

#include "doctest.h"
#include "hexatm/kinematics.hpp"

using namespace hexatm;

namespace {

const AirspaceConfig kAir{};
const KinematicLimits kLim{};

AircraftState at(Vec2 p, double heading_deg) {
  return {p, deg2rad(heading_deg), kLim.speed_mps, 0.0, true};
}

Pose entry_pose(CellId cell, int dir) {
  return {centroid(cell, kAir) - unit(direction_angle(dir)) * kAir.apothem_m(), direction_angle(dir)};
}

// Time spent inside `cell` when flying `leg` preceded and followed by 200 m
// of straight flight, measured by sampling locate() every 10 ms.
double measured_occupation(const CellLeg& leg, CellId cell) {
  Path path(Pose{leg.path.start_pose().position - unit(leg.path.start_pose().heading) * 200.0,
                 leg.path.start_pose().heading});
  path.append_straight(200.0);
  path.append(leg.path);
  path.append_straight(200.0);
  const double dt = 0.01;
  double first = -1.0;
  double last = -1.0;
  for (double t = 0.0; t * kLim.speed_mps <= path.length(); t += dt) {
    const auto where = locate(path.pose_at(t * kLim.speed_mps).position, kAir);
    if (where && *where == cell) {
      if (first < 0.0) first = t;
      last = t;
    }
  }
  return last - first;
}

}  // namespace

TEST_CASE("limits and cell time") {
  CHECK(kLim.turn_radius_m() == doctest::Approx(391.374).epsilon(1e-4));
  CHECK(2.0 * kLim.turn_radius_m() < kAir.apothem_m());
  CHECK(cell_time(kAir, kLim) == doctest::Approx(4000.0 / 44.4));
  CHECK_THROWS(KinematicLimits{0.0, 0.1}.validate());
}

TEST_CASE("integrate: straight and turning") {
  const auto s = integrate(at({0, 0}, 0.0), HoldHeading{}, 2.0, kLim);
  CHECK(s.position.x == doctest::Approx(88.8));
  CHECK(s.position.y == doctest::Approx(0.0));
  CHECK(s.flown_distance_m == doctest::Approx(88.8));

  const auto t = integrate(at({0, 0}, 0.0), TurnToHeading{deg2rad(90.0), TurnSense::CCW}, 1.0, kLim);
  CHECK(rad2deg(t.heading) == doctest::Approx(6.5));

  // stops exactly on the target heading
  const auto u = integrate(at({0, 0}, 0.0), TurnToHeading{deg2rad(3.0), TurnSense::CCW}, 1.0, kLim);
  CHECK(rad2deg(u.heading) == doctest::Approx(3.0));

  SUBCASE("full circle takes 360/6.5 seconds") {
    AircraftState st = at({0, 0}, 0.0);
    const TurnToHeading cmd{wrap_2pi(-1e-12), TurnSense::CCW};
    double elapsed = 0.0;
    const double dt = 0.01;
    double turned = 0.0;
    while (turned < 2.0 * std::numbers::pi - 1e-9 && elapsed < 100.0) {
      const auto next = integrate(st, cmd, dt, kLim);
      turned += wrap_2pi(next.heading - st.heading);
      st = next;
      elapsed += dt;
    }
    CHECK(elapsed == doctest::Approx(360.0 / 6.5).epsilon(1e-3));
  }
}

TEST_CASE("integrate: turn-rate bound and constant speed (property)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> kind(0, 2);
  AircraftState st = at({0, 0}, 0.0);
  const double dt = 0.5;
  for (int i = 0; i < 4000; ++i) {
    GuidanceCommand cmd = HoldHeading{};
    if (kind(rng) > 0) cmd = TurnToHeading{angle(rng), kind(rng) == 1 ? TurnSense::CW : TurnSense::CCW};
    const auto next = integrate(st, cmd, dt, kLim);
    const double dh = std::abs(wrap_pi(next.heading - st.heading));
    CHECK(dh / dt <= kLim.turn_rate_radps + 1e-9);
    const double v = distance(next.position, st.position) / dt;
    CHECK(std::abs(v - kLim.speed_mps) <= 0.001 * kLim.speed_mps);
    CHECK(next.flown_distance_m >= st.flown_distance_m);
    st = next;
  }
  CHECK(st.flown_distance_m == doctest::Approx(4000 * dt * kLim.speed_mps));
}

TEST_CASE("direct_to") {
  CHECK(std::holds_alternative<HoldHeading>(direct_to(at({0, 0}, 0.0), {10000, 0}, kLim)));
  CHECK(std::holds_alternative<HoldHeading>(direct_to(at({0, 0}, 0.0), {0, 0}, kLim)));

  const auto up = direct_to(at({0, 0}, 0.0), {0, 10000}, kLim);
  REQUIRE(std::holds_alternative<TurnToHeading>(up));
  CHECK(std::get<TurnToHeading>(up).sense == TurnSense::CCW);
  CHECK(rad2deg(std::get<TurnToHeading>(up).target) == doctest::Approx(90.0));

  const Vec2 behind = unit(deg2rad(181.0)) * 10000.0;
  const auto back = direct_to(at({0, 0}, 0.0), behind, kLim);
  REQUIRE(std::holds_alternative<TurnToHeading>(back));
  CHECK(std::get<TurnToHeading>(back).sense == TurnSense::CW);

  // inside the left turning circle: fly on until it becomes reachable
  const auto tight = direct_to(at({0, 0}, 0.0), {0, 300}, kLim);
  CHECK(std::holds_alternative<HoldHeading>(tight));
}

TEST_CASE("plan_leg: constant occupation for every entry/exit pair") {
  const double tcell = cell_time(kAir, kLim);
  const CellId center{0};
  for (int in = 0; in < 6; ++in) {
    const Pose entry = entry_pose(center, in);
    for (CellId next : neighbors(center, kAir)) {
      const CellLeg leg = plan_leg(entry, center, next, kAir, kLim);
      CAPTURE(in);
      CAPTURE(next.index);
      CHECK(leg.kind == LegKind::Transit);
      CHECK(leg.path.length() == doctest::Approx(4000.0).epsilon(1e-9));
      CHECK(leg.occupation_s == doctest::Approx(tcell));
      CHECK(path_contained(leg.path, center, kAir, 5.0));
      CHECK(std::abs(measured_occupation(leg, center) - tcell) <= 2.0);
      for (const auto& seg : leg.path.segments()) {
        CHECK(std::abs(seg.curvature) <= 1.0 / kLim.turn_radius_m() + 1e-12);
      }
      // Legs stay straight long enough for the holding loop insertion.
      CHECK(leg.path.segments().front().curvature == 0.0);
      CHECK(leg.path.segments().front().length_m >= hold_entry_offset_m(kAir, kLim));
    }
  }
}

TEST_CASE("plan_leg: straight-through and sharp turns") {
  const CellId center{0};
  const Pose from_below = entry_pose(center, 0);  // heading up
  const CellLeg straight = plan_leg(from_below, center, CellId{1}, kAir, kLim);
  CHECK(straight.path.segments().size() == 1);
  CHECK(straight.occupation_s == doctest::Approx(4000.0 / 44.4));

  // 120 degree turn starts well before the centroid and passes outside it
  const CellId right_down = *cube_to_cell(kCubeDirections[2], kAir);
  const CellLeg sharp = plan_leg(from_below, center, right_down, kAir, kLim);
  CHECK(sharp.path.segments().front().length_m < 2000.0 - 500.0);
  double min_to_centroid = 1e9;
  for (double s = 0; s <= sharp.path.length(); s += 5.0) {
    min_to_centroid = std::min(min_to_centroid, norm(sharp.path.pose_at(s).position));
  }
  CHECK(min_to_centroid > 50.0);

  // 60 degree turn passes closer to the centroid than the 120 degree one
  const CellId right_up = *cube_to_cell(kCubeDirections[1], kAir);
  const CellLeg gentle = plan_leg(from_below, center, right_up, kAir, kLim);
  double gentle_min = 1e9;
  for (double s = 0; s <= gentle.path.length(); s += 5.0) {
    gentle_min = std::min(gentle_min, norm(gentle.path.pose_at(s).position));
  }
  CHECK(gentle_min < min_to_centroid);
}

TEST_CASE("plan_leg: errors") {
  const CellId center{0};
  CHECK_THROWS_AS(plan_leg(entry_pose(center, 0), center, CellId{10}, kAir, kLim), GuidanceError);
  CHECK_THROWS_AS(plan_leg(Pose{{5.0, 5.0}, 0.0}, center, CellId{1}, kAir, kLim), GuidanceError);
}

TEST_CASE("holding loop stays in cell for one extra cell time") {
  for (CellId c : all_cells(kAir)) {
    for (int dir = 0; dir < 6; ++dir) {
      const Pose e = entry_pose(c, dir);
      const Pose q{e.position + unit(e.heading) * hold_entry_offset_m(kAir, kLim), e.heading};
      if (!locate(q.position, kAir) || *locate(q.position, kAir) != c) continue;
      const CellLeg hold = plan_leg(q, c, c, kAir, kLim);
      CHECK(hold.kind == LegKind::Hold);
      CHECK(hold.occupation_s == doctest::Approx(cell_time(kAir, kLim)));
      CHECK(hold.path.length() == doctest::Approx(4000.0));
      CHECK(distance(hold.path.end_pose().position, q.position) < 1e-6);
      CHECK(std::abs(wrap_pi(hold.path.end_pose().heading - q.heading)) < 1e-9);
      CHECK(path_contained(hold.path, c, kAir, 5.0, 0.0));
    }
  }
}

TEST_CASE("origin and final legs") {
  const CellId origin{7};
  const CellLeg o = plan_origin_leg(origin, CellId{1}, kAir, kLim);
  CHECK(o.path.length() == doctest::Approx(2000.0));
  CHECK(distance(o.path.end_pose().position, (centroid(origin, kAir) + centroid(CellId{1}, kAir)) * 0.5) < 1e-9);
  const CellLeg f = plan_final_leg(entry_pose(CellId{10}, 3), CellId{10}, kAir, kLim);
  CHECK(distance(f.path.end_pose().position, centroid(CellId{10}, kAir)) < 1e-9);
}

TEST_CASE("follow leg integration tracks the path") {
  const CellLeg leg = plan_leg(entry_pose(CellId{0}, 0), CellId{0}, *cube_to_cell(kCubeDirections[2], kAir), kAir, kLim);
  AircraftState st{leg.path.start_pose().position, leg.path.start_pose().heading, kLim.speed_mps, 0.0, true};
  double arc = 0.0;
  const double dt = 0.5;
  while (arc < leg.path.length()) {
    const auto next = integrate(st, FollowLeg{&leg.path, arc}, dt, kLim);
    CHECK(std::abs(wrap_pi(next.heading - st.heading)) / dt <= kLim.turn_rate_radps + 1e-9);
    CHECK(distance(next.position, st.position) / dt == doctest::Approx(kLim.speed_mps).epsilon(1e-3));
    arc += dt * kLim.speed_mps;
    st = next;
  }
}
