#include "hexatm/daa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hexatm {

namespace {

CpaPrediction predict(const Vec2& dp, const Vec2& dv, double horizon_s, double dthr_m) {
  CpaPrediction out;
  out.dthr_m = dthr_m;
  const double vv = dot(dv, dv);
  const double pv = dot(dp, dv);
  const double pp = dot(dp, dp);
  double t = 0.0;
  if (vv > 0.0) t = std::clamp(-pv / vv, 0.0, horizon_s);
  out.t_cpa_s = t;
  out.miss_m = norm(dp + dv * t);

  const double d2 = dthr_m * dthr_m;
  if (pp < d2) {
    out.t_violation_s = 0.0;
  } else if (vv > 0.0) {
    const double disc = pv * pv - vv * (pp - d2);
    if (disc > 0.0) {
      const double t1 = (-pv - std::sqrt(disc)) / vv;
      if (t1 >= 0.0 && t1 <= horizon_s) out.t_violation_s = t1;
    }
  }
  return out;
}

bool violates(const AircraftState& own, double heading, const AircraftState& intr, const DaaConfig& cfg) {
  const Vec2 dp = intr.position - own.position;
  const Vec2 dv = intr.velocity() - unit(heading) * own.speed_mps;
  return predict(dp, dv, cfg.lookahead_s, cfg.dthr_m).t_violation_s.has_value();
}

bool heading_clear(const AircraftState& own, double heading, std::span<const AircraftState> others,
                   const DaaConfig& cfg) {
  return std::none_of(others.begin(), others.end(),
                      [&](const AircraftState& o) { return o.active && violates(own, heading, o, cfg); });
}

}  // namespace

void DaaConfig::validate() const {
  if (!(dthr_m > 0.0)) throw std::domain_error("dthr_m must be positive");
  if (!(lookahead_s > 0.0)) throw std::domain_error("lookahead_s must be positive");
  if (!(hold_s > 0.0)) throw std::domain_error("hold_s must be positive");
  if (!(band_step_deg > 0.0) || band_step_deg > 180.0) throw std::domain_error("band_step_deg out of range");
  if (!(max_band_search_deg > 0.0) || max_band_search_deg > 180.0) {
    throw std::domain_error("max_band_search_deg out of range");
  }
}

double dthr_from_nmi(double nmi) {
  if (!(nmi > 0.0)) throw std::domain_error("DTHR must be positive");
  if (std::abs(nmi - 0.66) < 1e-9) return 4000.0 * kMetersPerFoot;
  return nmi * kMetersPerNmi;
}

CpaPrediction predict_cpa(const AircraftState& own, const AircraftState& intruder, double horizon_s, double dthr_m) {
  return predict(intruder.position - own.position, intruder.velocity() - own.velocity(), horizon_s, dthr_m);
}

std::vector<DaaAlert> detect(int own, std::span<const Traffic> all, const DaaConfig& cfg) {
  const auto self = std::find_if(all.begin(), all.end(), [own](const Traffic& t) { return t.id == own; });
  if (self == all.end() || !self->state.active) throw std::invalid_argument("ownship not active");

  std::vector<DaaAlert> alerts;
  for (const auto& other : all) {
    if (other.id == own || !other.state.active) continue;
    const CpaPrediction p = predict_cpa(self->state, other.state, cfg.lookahead_s, cfg.dthr_m);
    if (p.t_violation_s) alerts.push_back({own, other.id, *p.t_violation_s, p.miss_m});
  }
  std::stable_sort(alerts.begin(), alerts.end(), [](const DaaAlert& a, const DaaAlert& b) {
    return a.time_to_violation_s < b.time_to_violation_s;
  });
  return alerts;
}

HeadingBands heading_bands(const AircraftState& own, std::span<const AircraftState> intruders, const DaaConfig& cfg) {
  const double step = deg2rad(cfg.band_step_deg);
  auto is_free = [&](double heading) { return heading_clear(own, heading, intruders, cfg); };

  HeadingBands bands;
  const int search = static_cast<int>(std::floor(cfg.max_band_search_deg / cfg.band_step_deg + 1e-9));
  for (int k = 0; k <= search && !bands.cw_recovery; ++k) {
    const double h = wrap_2pi(own.heading - k * step);
    if (is_free(h)) bands.cw_recovery = h;
  }
  for (int k = 0; k <= search && !bands.ccw_recovery; ++k) {
    const double h = wrap_2pi(own.heading + k * step);
    if (is_free(h)) bands.ccw_recovery = h;
  }

  // Full-circle free intervals, sampled counter-clockwise from the current heading.
  const int samples = static_cast<int>(std::lround(360.0 / cfg.band_step_deg));
  std::vector<char> free(samples);
  for (int i = 0; i < samples; ++i) free[i] = is_free(wrap_2pi(own.heading + i * step)) ? 1 : 0;
  const double base = rad2deg(wrap_2pi(own.heading));
  auto deg_at = [&](int i) { return std::fmod(base + i * cfg.band_step_deg, 360.0); };
  if (std::all_of(free.begin(), free.end(), [](char f) { return f != 0; })) {
    bands.free.push_back({base, base});  // whole circle
    return bands;
  }
  // Start scanning just after a blocked sample so intervals do not wrap.
  int start = 0;
  while (free[start]) ++start;
  for (int n = 1; n <= samples; ++n) {
    const int i = (start + n) % samples;
    if (!free[i]) continue;
    int j = i;
    int len = 0;
    while (free[(j + 1) % samples] && len < samples) {
      j = (j + 1) % samples;
      ++len;
      ++n;
    }
    bands.free.push_back({deg_at(i), deg_at(j)});
  }
  return bands;
}

DaaDecision daa_step(const DaaState& state, int own, std::span<const Traffic> all, const DaaConfig& cfg,
                     const Vec2& resume_point, const KinematicLimits& limits) {
  DaaDecision d;
  d.next = state;
  d.alerts = detect(own, all, cfg);

  const auto self = std::find_if(all.begin(), all.end(), [own](const Traffic& t) { return t.id == own; });
  if (!d.alerts.empty()) {
    std::vector<AircraftState> others;
    for (const auto& t : all) {
      if (t.id != own && t.state.active) others.push_back(t.state);
    }
    const HeadingBands bands = heading_bands(self->state, others, cfg);
    if (bands.cw_recovery) {
      d.action = DaaAction::Avoid;
      d.command = TurnToHeading{*bands.cw_recovery, TurnSense::CW};
      d.next.mode = DaaMode::Avoiding;
    } else if (bands.ccw_recovery) {
      d.action = DaaAction::Avoid;
      d.command = TurnToHeading{*bands.ccw_recovery, TurnSense::CCW};
      d.next.mode = DaaMode::Avoiding;
    }
    return d;
  }
  if (state.mode == DaaMode::Cruise) return d;
  std::vector<AircraftState> others;
  for (const auto& t : all) {
    if (t.id != own && t.state.active) others.push_back(t.state);
  }
  d.action = DaaAction::Resume;
  d.command = direct_to(self->state, resume_point, limits);
  d.next.mode = DaaMode::Resuming;
  const bool closing = std::any_of(others.begin(), others.end(), [&](const AircraftState& o) {
    const CpaPrediction p = predict_cpa(self->state, o, cfg.lookahead_s, cfg.dthr_m);
    return p.t_cpa_s > 0.0 && p.t_cpa_s < cfg.lookahead_s;
  });
  if (closing && !std::holds_alternative<HoldHeading>(*d.command)) {
    d.command = HoldHeading{};
    d.limited = true;
  } else if (const auto* turn = std::get_if<TurnToHeading>(&*d.command)) {
    // Hold the current heading until every heading on the way is clear.
    const double step = deg2rad(cfg.band_step_deg);
    const double sign = turn->sense == TurnSense::CCW ? 1.0 : -1.0;
    const double span = turn->sense == TurnSense::CCW ? wrap_2pi(turn->target - self->state.heading)
                                                      : wrap_2pi(self->state.heading - turn->target);
    const int n = static_cast<int>(std::ceil(span / step - 1e-9));
    for (int k = 1; k <= n; ++k) {
      const double h = k == n ? turn->target : wrap_2pi(self->state.heading + sign * k * step);
      if (!heading_clear(self->state, h, others, cfg)) {
        d.command = HoldHeading{};
        d.limited = true;
        break;
      }
    }
  }
  return d;
}

ResumeTarget resume_target(std::optional<CellId> current_cell, std::span<const CellId> strategic_path,
                           int last_visited_index, CellId destination, const AirspaceConfig& cfg) {
  const ResumeTarget direct{centroid(destination, cfg), 3, -1};
  if (!current_cell || strategic_path.empty()) return direct;
  const int n = static_cast<int>(strategic_path.size());

  for (int j = std::max(last_visited_index, 0); j < n; ++j) {
    if (strategic_path[j] == *current_cell) {
      if (j + 1 >= n) return {centroid(destination, cfg), 1, n - 1};
      return {centroid(strategic_path[j + 1], cfg), 1, j + 1};
    }
  }
  const auto around = neighbors(*current_cell, cfg);
  for (int j = last_visited_index + 1; j < n; ++j) {
    if (std::find(around.begin(), around.end(), strategic_path[j]) != around.end()) {
      return {centroid(strategic_path[j], cfg), 2, j};
    }
  }
  return direct;
}

}  // namespace hexatm
