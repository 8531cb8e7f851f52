#include "hexatm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hexatm {

namespace {

enum class Phase { Pending, Active, Done };
enum class Source { Plan, Ledger, Free };

struct Craft {
  int id = 0;
  Mission mission;
  bool intruder = false;
  Phase phase = Phase::Pending;
  AircraftState st;
  long entry_tick = 0;
  double entry_time = 0.0;
  double finish_time = 0.0;
  int holds = 0;

  Source src = Source::Free;
  Path path;
  double arc = 0.0;

  // Plan source: precomputed legs and the exact start time of the current one.
  std::vector<CellLeg> legs;
  std::size_t leg_idx = 0;
  double leg_start = 0.0;

  // Ledger source.
  CellId cell;
  Pose cell_entry;
  bool holding = false;
  Reservation cur_res;
  std::optional<Reservation> next_res;

  std::vector<CellId> plan_path;
  int last_visited = -1;

  bool daa_armed = false;
  DaaState daa;
  std::optional<GuidanceCommand> avoid_cmd;

  CpaRecord cpa;
};

long ticks_for(double seconds, double dt) { return std::lround(std::ceil(seconds / dt - 1e-9)); }

class Simulation {
 public:
  Simulation(const ScenarioConfig& sc, const EngineConfig& ec, Trace* trace)
      : sc_(sc), ec_(ec), cfg_(ec.airspace), trace_(trace), tcell_(cell_time(ec.airspace, ec.limits)),
        hold_offset_(hold_entry_offset_m(ec.airspace, ec.limits)) {}

  ScenarioResult run() {
    setup();
    const long metric_every = std::lround(ec_.dt_metric_s / ec_.dt_integration_s);
    const long daa_every = std::lround(ec_.daa.hold_s / ec_.dt_integration_s);
    const long last_tick = ticks_for(ec_.timeout_s, ec_.dt_integration_s);
    long k = 0;
    double t = 0.0;
    for (;; ++k) {
      t = k * ec_.dt_integration_s;
      captures(t);
      if (ec_.mode == Mode::CollabRec && k == intruder_tick_) seed_ledger();
      entries(k, t);
      leg_switches(t);
      if (k % daa_every == 0) daa_decisions(k);
      if (k % metric_every == 0) sample(t);
      const bool all_done = std::all_of(crafts_.begin(), crafts_.end(), [](const Craft& c) { return c.phase == Phase::Done; });
      if (all_done || k >= last_tick) break;
      integrate_all();
    }
    return finish(t);
  }

 private:
  void setup() {
    ec_.validate();
    if (sc_.missions.empty() || sc_.missions.size() > 4) throw std::invalid_argument("scenario needs 1 to 4 aircraft");
    validate_scenario(sc_, cfg_, sc_.missions.size());
    const bool rec = is_recovery(ec_.mode);
    if (rec != sc_.has_intruder()) throw std::invalid_argument("scenario intruder does not match the mode");
    intruder_tick_ = rec ? ticks_for(sc_.intruder_entry_s, ec_.dt_integration_s) : -1;

    for (const auto& m : sc_.missions) {
      Craft c;
      c.id = m.id;
      c.mission = m;
      c.intruder = m.id == sc_.intruder_index;
      c.cpa.aircraft = m.id;
      crafts_.push_back(std::move(c));
    }
    if (trace_) trace_->plan.assign(crafts_.size(), {});

    switch (ec_.mode) {
      case Mode::DaaU:
        for (auto& c : crafts_) {
          activate_free(c, 0, 0.0);
          c.daa_armed = true;
        }
        break;
      case Mode::CollabU:
        for (auto& c : crafts_) c.entry_tick = 0;
        break;
      case Mode::StrategicU:
      case Mode::DaaRec:
      case Mode::CollabRec:
        plan_regulars();
        for (auto& c : crafts_) {
          if (c.intruder) c.entry_tick = intruder_tick_;
        }
        break;
    }
  }

  void plan_regulars() {
    AllocationProblem p{cfg_, {}};
    std::vector<Craft*> regulars;
    for (auto& c : crafts_) {
      if (c.intruder) continue;
      p.missions.push_back(c.mission);
      regulars.push_back(&c);
    }
    const SolveResult r = solve(p);
    if (!r.feasible) {
      anomaly("strategic plan infeasible");
      for (Craft* c : regulars) activate_free(*c, 0, 0.0);
      return;
    }
    for (std::size_t i = 0; i < regulars.size(); ++i) {
      Craft& c = *regulars[i];
      c.plan_path = r.plan.paths[i];
      c.last_visited = 0;
      if (trace_) trace_->plan[c.id] = c.plan_path;
      try {
        c.legs = legs_for(c.plan_path);
      } catch (const GuidanceError& e) {
        anomaly("aircraft " + std::to_string(c.id) + ": " + e.what());
        activate_free(c, 0, 0.0);
        continue;
      }
      c.phase = Phase::Active;
      c.src = Source::Plan;
      c.path = c.legs.front().path;
      c.st = {c.path.start_pose().position, c.path.start_pose().heading, ec_.limits.speed_mps, 0.0, true};
    }
  }

  std::vector<CellLeg> legs_for(const std::vector<CellId>& path) const {
    std::vector<CellLeg> legs;
    if (path.size() < 2) throw GuidanceError("plan has no legs");
    legs.push_back(plan_origin_leg(path[0], path[1], cfg_, ec_.limits));
    for (std::size_t j = 1; j < path.size(); ++j) {
      const Pose entry = legs.back().path.end_pose();
      if (j + 1 == path.size()) {
        legs.push_back(plan_final_leg(entry, path[j], cfg_, ec_.limits));
      } else {
        legs.push_back(plan_leg(entry, path[j], path[j + 1], cfg_, ec_.limits));
      }
    }
    return legs;
  }

  void activate_free(Craft& c, long tick, double t) {
    const Vec2 o = centroid(c.mission.origin, cfg_);
    const Vec2 d = centroid(c.mission.destination, cfg_);
    c.phase = Phase::Active;
    c.src = Source::Free;
    c.entry_tick = tick;
    c.entry_time = t;
    c.st = {o, wrap_2pi(bearing(o, d)), ec_.limits.speed_mps, 0.0, true};
  }

  void anomaly(const std::string& what) { anomalies_.push_back(what); }

  void log_grant(const Reservation& r) {
    if (trace_) trace_->ledger.push_back(r);
  }

  Vec2 free_target(const Craft& c) const {
    if (c.plan_path.empty()) return centroid(c.mission.destination, cfg_);
    return resume_target(locate(c.st.position, cfg_), c.plan_path, c.last_visited, c.mission.destination, cfg_).point;
  }

  // (1) arrivals and releases
  void captures(double t) {
    for (auto& c : crafts_) {
      if (c.phase != Phase::Active) continue;
      const double d = distance(c.st.position, centroid(c.mission.destination, cfg_));
      if (d > ec_.capture_radius_m) continue;
      c.phase = Phase::Done;
      c.st.active = false;
      c.st.flown_distance_m += d;
      c.finish_time = t + d / c.st.speed_mps;
      release_on_arrival(c.id, ledger_, t);
    }
  }

  // collab_rec: at intruder appearance the regulars' committed cells enter the ledger.
  void seed_ledger() {
    for (auto& c : crafts_) {
      if (c.phase != Phase::Active || c.src != Source::Plan) continue;
      const CellLeg& leg = c.legs[c.leg_idx];
      c.cell = leg.cell;
      c.cell_entry = leg.path.start_pose();
      c.cur_res = {leg.cell, c.id, c.leg_start, c.leg_start + leg.occupation_s, false};
      try {
        ledger_.reserve(c.cur_res);
        log_grant(c.cur_res);
        c.next_res.reset();
        if (leg.kind != LegKind::Final) {
          const Reservation next{leg.exit_to, c.id, c.cur_res.t_end_s, c.cur_res.t_end_s + tcell_, false};
          ledger_.reserve(next);
          log_grant(next);
          c.next_res = next;
        }
      } catch (const std::logic_error& e) {
        anomaly("aircraft " + std::to_string(c.id) + ": " + e.what());
      }
      c.src = Source::Ledger;
    }
  }

  // (1b) scheduled entries, ascending id
  void entries(long k, double t) {
    for (auto& c : crafts_) {
      if (c.phase != Phase::Pending || c.entry_tick != k) continue;
      if (ec_.mode == Mode::DaaRec) {
        activate_free(c, k, t);
        continue;
      }
      const auto e = try_entry(c.id, c.mission.origin, c.mission.destination, ledger_, t, cfg_, tcell_,
                               ec_.intruder_retry_s);
      if (!e.entered) {
        c.entry_tick = ticks_for(e.next_attempt_s, ec_.dt_integration_s);
        continue;
      }
      log_grant(e.origin);
      log_grant(e.first);
      const CellLeg leg = plan_origin_leg(c.mission.origin, e.first.cell, cfg_, ec_.limits);
      c.phase = Phase::Active;
      c.src = Source::Ledger;
      c.entry_tick = k;
      c.entry_time = t;
      c.cell = c.mission.origin;
      c.cell_entry = leg.path.start_pose();
      c.cur_res = e.origin;
      c.next_res = e.first;
      c.path = leg.path;
      c.arc = 0.0;
      c.st = {c.path.start_pose().position, c.path.start_pose().heading, ec_.limits.speed_mps, 0.0, true};
    }
  }

  std::optional<CellId> preferred_for(const Craft& c) const {
    if (c.plan_path.empty()) return std::nullopt;
    const ResumeTarget r = resume_target(c.cell, c.plan_path, c.last_visited, c.mission.destination, cfg_);
    if (r.path_index < 0) return std::nullopt;
    const CellId want = c.plan_path[r.path_index];
    if (!adjacent(c.cell, want, cfg_)) return std::nullopt;
    return want;
  }

  // (2) leg completions and the ledger requests they trigger, ascending id
  void leg_switches(double t) {
    (void)t;
    for (auto& c : crafts_) {
      if (c.phase != Phase::Active || c.src == Source::Free) continue;
      if (c.arc < c.path.length()) continue;
      try {
        if (c.src == Source::Plan) {
          next_plan_leg(c);
        } else {
          next_ledger_leg(c);
        }
      } catch (const std::exception& e) {
        anomaly("aircraft " + std::to_string(c.id) + ": " + e.what());
        release_on_arrival(c.id, ledger_, t);
        c.src = Source::Free;
      }
    }
  }

  void next_plan_leg(Craft& c) {
    c.arc -= c.path.length();
    c.leg_start += c.legs[c.leg_idx].occupation_s;
    if (++c.leg_idx >= c.legs.size()) throw GuidanceError("ran past the final leg");
    c.path = c.legs[c.leg_idx].path;
  }

  void next_ledger_leg(Craft& c) {
    if (c.holding) {
      // Loop done: back at the insertion point, ask again.
      const double loop = c.path.length() - hold_offset_;
      const Reservation r = request_next_cell(c.id, c.cur_res, c.mission.destination, ledger_, cfg_, tcell_,
                                              preferred_for(c));
      log_grant(r);
      if (r.hold) {
        c.cur_res = r;
        c.arc -= loop;
        ++c.holds;
        return;
      }
      const CellLeg leg = plan_leg(c.cell_entry, c.cell, r.cell, cfg_, ec_.limits);
      c.arc -= loop;
      c.path = leg.path;
      c.next_res = r;
      c.holding = false;
      return;
    }

    if (!c.next_res) throw GuidanceError("left a cell without a granted successor");
    const Pose entry = c.path.end_pose();
    c.arc -= c.path.length();
    c.cell = c.next_res->cell;
    c.cell_entry = entry;
    c.cur_res = *c.next_res;
    c.next_res.reset();
    if (c.cell == c.mission.destination) {
      c.path = plan_final_leg(entry, c.cell, cfg_, ec_.limits).path;
      return;
    }
    const Reservation r = request_next_cell(c.id, c.cur_res, c.mission.destination, ledger_, cfg_, tcell_,
                                            preferred_for(c));
    log_grant(r);
    if (!r.hold) {
      c.path = plan_leg(entry, c.cell, r.cell, cfg_, ec_.limits).path;
      c.next_res = r;
      return;
    }
    Path program(entry);
    program.append_straight(hold_offset_);
    program.append(plan_leg(program.end_pose(), c.cell, c.cell, cfg_, ec_.limits).path);
    c.path = std::move(program);
    c.cur_res = r;
    c.holding = true;
    ++c.holds;
  }

  // (3) DAA decisions, ascending id
  void daa_decisions(long k) {
    if (ec_.mode == Mode::DaaRec && k >= intruder_tick_) {
      for (auto& c : crafts_) c.daa_armed = true;
    }
    std::vector<Traffic> traffic;
    for (const auto& c : crafts_) {
      if (c.phase == Phase::Active) traffic.push_back({c.id, c.st});
    }
    for (auto& c : crafts_) {
      if (c.phase != Phase::Active || !c.daa_armed) continue;
      const DaaDecision d = daa_step(c.daa, c.id, traffic, ec_.daa, free_target(c), ec_.limits);
      c.daa = d.next;
      if (d.action == DaaAction::Avoid) {
        c.src = Source::Free;
        c.avoid_cmd = d.command;
      } else if (d.action == DaaAction::Resume) {
        c.avoid_cmd.reset();
        if (d.limited) c.avoid_cmd = d.command;
      }
    }
  }

  // (4) integration
  void integrate_all() {
    const double dt = ec_.dt_integration_s;
    for (auto& c : crafts_) {
      if (c.phase != Phase::Active) continue;
      GuidanceCommand cmd = HoldHeading{};
      if (c.src == Source::Free) {
        if (c.daa.mode != DaaMode::Cruise && c.avoid_cmd) {
          cmd = *c.avoid_cmd;
        } else {
          cmd = direct_to(c.st, free_target(c), ec_.limits);
        }
      } else {
        cmd = FollowLeg{&c.path, c.arc};
      }
      c.st = integrate(c.st, cmd, dt, ec_.limits);
      if (c.src != Source::Free) c.arc += c.st.speed_mps * dt;
      update_last_visited(c);
    }
  }

  void update_last_visited(Craft& c) const {
    if (c.plan_path.empty()) return;
    const auto here = locate(c.st.position, cfg_);
    if (!here) return;
    for (int j = c.last_visited + 1; j < static_cast<int>(c.plan_path.size()); ++j) {
      if (c.plan_path[j] == *here) {
        c.last_visited = j;
        return;
      }
    }
  }

  const char* tag(const Craft& c) const {
    if (c.src == Source::Free) {
      if (c.daa.mode == DaaMode::Avoiding) return "avoid";
      if (c.daa.mode == DaaMode::Resuming) return "resume";
      return "direct";
    }
    if (c.src == Source::Ledger && c.holding) return "hold";
    return "leg";
  }

  // (5) metrics
  void sample(double t) {
    std::vector<const Craft*> active;
    for (const auto& c : crafts_) {
      if (c.phase == Phase::Active) active.push_back(&c);
    }
    std::vector<double> dists;
    std::vector<Vec2> positions;
    for (const Craft* c : active) positions.push_back(c->st.position);
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double d = distance(active[i]->st.position, active[j]->st.position);
        dists.push_back(d);
        note_cpa(crafts_[active[i]->id], *active[j], d, t);
        note_cpa(crafts_[active[j]->id], *active[i], d, t);
        if (!hmd_ || d < *hmd_) {
          hmd_ = d;
          hmd_t_ = t;
        }
      }
    }
    classify_events(dists, positions, ec_, events_);
    if (trace_) {
      for (const Craft* c : active) {
        const auto cell = locate(c->st.position, cfg_);
        trace_->rows.push_back({t, c->id, c->st.position, rad2deg(wrap_2pi(c->st.heading)), tag(*c),
                                cell ? static_cast<int>(cell->index) : -1});
      }
    }
  }

  static void note_cpa(Craft& own, const Craft& other, double d, double t) {
    if (own.cpa.other >= 0 && d >= own.cpa.min_distance_m) return;
    own.cpa.other = other.id;
    own.cpa.min_distance_m = d;
    own.cpa.t_s = t;
    own.cpa.own_position = own.st.position;
    own.cpa.other_position = other.st.position;
  }

  ScenarioResult finish(double t) {
    ScenarioResult r;
    r.scenario_id = sc_.scenario_id;
    r.mode = ec_.mode;
    r.actual_hmd_m = hmd_;
    r.actual_hmd_t_s = hmd_t_;
    r.end_time_s = t;
    for (const auto& c : crafts_) {
      AircraftResult a;
      a.id = c.id;
      a.mission = c.mission;
      a.intruder = c.intruder;
      a.entered = c.phase != Phase::Pending;
      a.finished = c.phase == Phase::Done;
      a.entry_time_s = a.entered ? c.entry_time : 0.0;
      a.flight_time_s = a.finished ? c.finish_time - c.entry_time : (a.entered ? t - c.entry_time : 0.0);
      a.flown_distance_m = c.st.flown_distance_m;
      a.plan_legs = c.plan_path.empty() ? -1 : static_cast<int>(c.plan_path.size()) - 1;
      a.holds = c.holds;
      a.cpa = c.cpa;
      if (!a.finished) events_.timeout = true;
      r.aircraft.push_back(a);
    }
    r.events = events_;
    r.anomalies = anomalies_;
    return r;
  }

  const ScenarioConfig& sc_;
  const EngineConfig& ec_;
  const AirspaceConfig& cfg_;
  Trace* trace_;
  double tcell_;
  double hold_offset_;
  long intruder_tick_ = -1;
  std::vector<Craft> crafts_;
  ReservationLedger ledger_;
  std::optional<double> hmd_;
  double hmd_t_ = 0.0;
  Events events_;
  std::vector<std::string> anomalies_;
};

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::DaaU: return "daa_u";
    case Mode::StrategicU: return "strategic_u";
    case Mode::DaaRec: return "daa_rec";
    case Mode::CollabRec: return "collab_rec";
    case Mode::CollabU: return "collab_u";
  }
  return "?";
}

std::optional<Mode> parse_mode(const std::string& s) {
  for (Mode m : {Mode::DaaU, Mode::StrategicU, Mode::DaaRec, Mode::CollabRec, Mode::CollabU}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

std::optional<Mode> mode_from_method(const std::string& method) {
  if (method == "daa") return Mode::DaaU;
  if (method == "strategic") return Mode::StrategicU;
  if (method == "collab") return Mode::CollabU;
  if (method == "daa_rec") return Mode::DaaRec;
  if (method == "collab_rec") return Mode::CollabRec;
  return std::nullopt;
}

bool is_recovery(Mode m) { return m == Mode::DaaRec || m == Mode::CollabRec; }

void EngineConfig::validate() const {
  if (!(dt_integration_s > 0.0)) throw std::domain_error("dt_integration_s must be positive");
  const double ratio = dt_metric_s / dt_integration_s;
  if (!(ratio >= 1.0) || std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw std::domain_error("dt_metric_s must be a whole multiple of dt_integration_s");
  }
  const double daa_ratio = daa.hold_s / dt_integration_s;
  if (!(daa_ratio >= 1.0) || std::abs(daa_ratio - std::round(daa_ratio)) > 1e-9) {
    throw std::domain_error("DAA hold time must be a whole multiple of dt_integration_s");
  }
  if (!(timeout_s > 0.0)) throw std::domain_error("timeout_s must be positive");
  if (!(excursion_radius_m > 0.0) || !(hmd_violation_m > 0.0) || !(astm_los_m > 0.0) || !(capture_radius_m > 0.0)) {
    throw std::domain_error("thresholds must be positive");
  }
  if (!(intruder_retry_s > 0.0)) throw std::domain_error("intruder_retry_s must be positive");
  daa.validate();
  limits.validate();
  airspace.validate();
}

void classify_events(const std::vector<double>& pair_distances, const std::vector<Vec2>& positions,
                     const EngineConfig& ec, Events& events) {
  for (double d : pair_distances) {
    if (d < ec.hmd_violation_m) events.hmd_violation = true;
    if (d < ec.astm_los_m) events.astm_los = true;
  }
  for (const Vec2& p : positions) {
    if (norm(p) > ec.excursion_radius_m) events.excursion = true;
  }
}

ScenarioResult run_scenario(const ScenarioConfig& sc, const EngineConfig& ec, Trace* trace) {
  return Simulation(sc, ec, trace).run();
}

}  // namespace hexatm
