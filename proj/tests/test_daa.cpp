#include <cmath>
#include <random>

#include "doctest.h"
#include "hexatm/daa.hpp"

using namespace hexatm;

namespace {

const AirspaceConfig kAir{};
const KinematicLimits kLim{};
const DaaConfig kDaa{};

AircraftState at(Vec2 p, double heading_deg) {
  return {p, deg2rad(heading_deg), kLim.speed_mps, 0.0, true};
}

// Brute-force first entry into the threshold disc, sampled every millisecond.
std::optional<double> sampled_violation(const AircraftState& a, const AircraftState& b, double horizon, double dthr) {
  for (double t = 0.0; t <= horizon; t += 0.001) {
    if (distance(a.position + a.velocity() * t, b.position + b.velocity() * t) < dthr) return t;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("threshold conversion") {
  CHECK(dthr_from_nmi(0.66) == doctest::Approx(1219.2));
  CHECK(dthr_from_nmi(1.0) == doctest::Approx(1852.0));
  CHECK_THROWS(dthr_from_nmi(0.0));
  CHECK_THROWS(DaaConfig{-1.0}.validate());
}

TEST_CASE("predict_cpa: head-on") {
  const auto own = at({0, 0}, 0.0);
  const auto intr = at({10000, 0}, 180.0);
  const auto p = predict_cpa(own, intr, 110.0, 1219.2);
  REQUIRE(p.t_violation_s.has_value());
  CHECK(*p.t_violation_s == doctest::Approx((10000.0 - 1219.2) / 88.8));
  // closest approach at 112.6 s lies past the horizon and is clamped to it
  CHECK(p.t_cpa_s == doctest::Approx(110.0));
  CHECK(p.miss_m == doctest::Approx(10000.0 - 110.0 * 88.8));
  const auto longer = predict_cpa(own, intr, 200.0, 1219.2);
  CHECK(longer.t_cpa_s == doctest::Approx(10000.0 / 88.8));
  CHECK(longer.miss_m == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("predict_cpa: far apart or diverging gives no violation") {
  CHECK_FALSE(predict_cpa(at({0, 0}, 0.0), at({20000, 0}, 180.0), 110.0, 1219.2).t_violation_s);
  CHECK_FALSE(predict_cpa(at({0, 0}, 180.0), at({5000, 0}, 0.0), 110.0, 1219.2).t_violation_s);
  // parallel, same speed: separation never changes
  CHECK_FALSE(predict_cpa(at({0, 0}, 0.0), at({0, 1500}, 0.0), 110.0, 1219.2).t_violation_s);
  CHECK(predict_cpa(at({0, 0}, 0.0), at({0, 1000}, 0.0), 110.0, 1219.2).t_violation_s == 0.0);
}

TEST_CASE("predict_cpa agrees with sampling (property)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-8000.0, 8000.0);
  std::uniform_real_distribution<double> hdg(0.0, 360.0);
  for (int i = 0; i < 200; ++i) {
    const auto a = at({pos(rng), pos(rng)}, hdg(rng));
    const auto b = at({pos(rng), pos(rng)}, hdg(rng));
    const auto p = predict_cpa(a, b, 110.0, 1219.2);
    const auto s = sampled_violation(a, b, 110.0, 1219.2);
    CHECK(p.t_violation_s.has_value() == s.has_value());
    if (p.t_violation_s && s) CHECK(std::abs(*p.t_violation_s - *s) < 0.01);
  }
}

TEST_CASE("detect orders alerts by urgency and skips inactive aircraft") {
  std::vector<Traffic> all{
      {0, at({0, 0}, 0.0)},
      {1, at({9000, 0}, 180.0)},
      {2, at({5000, 0}, 180.0)},
      {3, at({3000, 0}, 180.0)},
  };
  all[3].state.active = false;
  const auto alerts = detect(0, all, kDaa);
  REQUIRE(alerts.size() == 2);
  CHECK(alerts[0].intruder == 2);
  CHECK(alerts[1].intruder == 1);
  CHECK_THROWS(detect(3, all, kDaa));
}

TEST_CASE("heading bands: head-on recoveries are mirror images") {
  const auto own = at({0, 0}, 0.0);
  const std::vector<AircraftState> intr{at({10000, 0}, 180.0)};
  const auto bands = heading_bands(own, intr, kDaa);
  REQUIRE(bands.cw_recovery.has_value());
  REQUIRE(bands.ccw_recovery.has_value());
  const double cw = rad2deg(wrap_pi(*bands.cw_recovery));
  const double ccw = rad2deg(wrap_pi(*bands.ccw_recovery));
  CHECK(cw < 0.0);
  CHECK(ccw > 0.0);
  CHECK(std::abs(cw + ccw) <= 1.0 + 1e-9);
  // each recovery heading is actually conflict-free
  for (double h : {*bands.cw_recovery, *bands.ccw_recovery}) {
    AircraftState turned = own;
    turned.heading = h;
    CHECK_FALSE(predict_cpa(turned, intr[0], kDaa.lookahead_s, kDaa.dthr_m).t_violation_s);
  }
  CHECK(bands.free.size() == 1);
}

TEST_CASE("heading bands: intruder already inside threshold leaves nothing free") {
  const auto own = at({0, 0}, 0.0);
  const std::vector<AircraftState> intr{at({500, 0}, 90.0)};
  const auto bands = heading_bands(own, intr, kDaa);
  CHECK_FALSE(bands.cw_recovery);
  CHECK_FALSE(bands.ccw_recovery);
  CHECK(bands.free.empty());
}

TEST_CASE("heading bands: no traffic means the whole circle is free") {
  const auto bands = heading_bands(at({0, 0}, 37.0), {}, kDaa);
  REQUIRE(bands.cw_recovery);
  CHECK(*bands.cw_recovery == doctest::Approx(deg2rad(37.0)));
  REQUIRE(bands.free.size() == 1);
  CHECK(bands.free[0].from_deg == bands.free[0].to_deg);
}

TEST_CASE("daa_step state machine") {
  std::vector<Traffic> all{{0, at({0, 0}, 0.0)}, {1, at({10000, 0}, 180.0)}};
  const Vec2 resume{20000, 0};

  const auto avoid = daa_step(DaaState{}, 0, all, kDaa, resume, kLim);
  CHECK(avoid.action == DaaAction::Avoid);
  CHECK(avoid.next.mode == DaaMode::Avoiding);
  REQUIRE(avoid.command.has_value());
  CHECK(std::get<TurnToHeading>(*avoid.command).sense == TurnSense::CW);

  all[1].state.position = {-30000, 0};
  const auto resume_step = daa_step(avoid.next, 0, all, kDaa, resume, kLim);
  CHECK(resume_step.action == DaaAction::Resume);
  CHECK(resume_step.next.mode == DaaMode::Resuming);

  const auto cruise = daa_step(DaaState{}, 0, all, kDaa, resume, kLim);
  CHECK(cruise.action == DaaAction::Continue);
  CHECK(cruise.next.mode == DaaMode::Cruise);
  CHECK_FALSE(cruise.command);

  // no recovery available: keep going
  all[1].state = at({500, 0}, 90.0);
  const auto stuck = daa_step(DaaState{}, 0, all, kDaa, resume, kLim);
  CHECK(stuck.action == DaaAction::Continue);
  CHECK_FALSE(stuck.alerts.empty());
}

TEST_CASE("resume_target criteria") {
  // straight line of cells up the middle: 10 -> 4 -> 0 -> 1 -> 7
  const std::vector<CellId> path{CellId{10}, CellId{4}, CellId{0}, CellId{1}, CellId{7}};
  const CellId dest{7};

  const auto on_path = resume_target(CellId{0}, path, 2, dest, kAir);
  CHECK(on_path.criterion == 1);
  CHECK(on_path.path_index == 3);
  CHECK(on_path.point == centroid(CellId{1}, kAir));

  // cell 2 is off the path but touches cell 1 (index 3)
  REQUIRE(adjacent(CellId{2}, CellId{1}, kAir));
  const auto near = resume_target(CellId{2}, path, 2, dest, kAir);
  CHECK(near.criterion == 2);
  CHECK(near.path_index == 3);

  const auto lost = resume_target(CellId{13}, path, 2, dest, kAir);
  CHECK(lost.criterion == 3);
  CHECK(lost.point == centroid(dest, kAir));

  CHECK(resume_target(std::nullopt, path, 2, dest, kAir).criterion == 3);
  // last cell on the path targets the destination
  CHECK(resume_target(CellId{7}, path, 4, dest, kAir).point == centroid(dest, kAir));
}

TEST_CASE("resume waits for closing traffic") {
  const DaaState avoiding{DaaMode::Avoiding};
  const Vec2 resume{20000, 0};
  // parallel, 3 km abeam and still closing: no alert, but no turn back yet
  std::vector<Traffic> all{{0, at({0, 0}, 90.0)}, {1, at({3000, 5000}, 270.0)}};
  const auto wait = daa_step(avoiding, 0, all, kDaa, resume, kLim);
  CHECK(wait.alerts.empty());
  CHECK(wait.action == DaaAction::Resume);
  CHECK(wait.next.mode == DaaMode::Resuming);
  CHECK(wait.limited);
  REQUIRE(wait.command.has_value());
  CHECK(std::holds_alternative<HoldHeading>(*wait.command));

  // once past, the turn toward the resume point goes ahead
  all[1].state = at({3000, -5000}, 270.0);
  const auto go = daa_step(wait.next, 0, all, kDaa, resume, kLim);
  CHECK(go.action == DaaAction::Resume);
  CHECK_FALSE(go.limited);
  REQUIRE(go.command.has_value());
  CHECK(std::get<TurnToHeading>(*go.command).sense == TurnSense::CW);
}
