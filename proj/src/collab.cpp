#include "hexatm/collab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hexatm {

namespace {

const std::vector<Reservation> kNone;

std::vector<CellId> candidates(CellId current, CellId destination, const AirspaceConfig& cfg,
                               std::optional<CellId> preferred) {
  auto out = neighbors(current, cfg);
  std::stable_sort(out.begin(), out.end(), [&](CellId a, CellId b) {
    const int da = hex_distance(a, destination, cfg);
    const int db = hex_distance(b, destination, cfg);
    return da != db ? da < db : a < b;
  });
  if (preferred) {
    const auto it = std::find(out.begin(), out.end(), *preferred);
    if (it != out.end()) std::rotate(out.begin(), it, it + 1);
  }
  return out;
}

}  // namespace

bool ReservationLedger::is_free(CellId cell, double t0, double t1, int except_owner) const {
  const auto it = cells_.find(cell);
  if (it == cells_.end()) return true;
  for (const auto& r : it->second) {
    if (r.owner == except_owner) continue;
    if (r.t_start_s < t1 - tol_ && t0 < r.t_end_s - tol_) return false;
  }
  return true;
}

bool ReservationLedger::is_open(const Reservation& r) const {
  if (retired_.count(r.owner)) return false;
  for (const auto& [cell, list] : cells_) {
    for (const auto& x : list) {
      if (x.owner == r.owner && std::abs(x.t_start_s - r.t_end_s) <= tol_) return false;
    }
  }
  return true;
}

bool ReservationLedger::grantable(CellId cell, double t0, double t1, int own) const {
  for (const auto& r : of_cell(cell)) {
    if (r.owner == own) continue;
    if (r.t_start_s < t1 - tol_ && t0 < r.t_end_s - tol_) return false;
    if (r.t_start_s >= t1 - tol_) return false;  // someone is already queued after us
    if (is_open(r)) return false;                // its owner may still need to hold
  }
  return true;
}

void ReservationLedger::retire(int owner) { retired_.insert(owner); }

void ReservationLedger::reserve(const Reservation& r) {
  if (!(r.t_end_s > r.t_start_s)) throw std::logic_error("empty reservation interval");
  if (!is_free(r.cell, r.t_start_s, r.t_end_s, r.owner)) throw std::logic_error("reservation overlaps another owner");
  auto& list = cells_[r.cell];
  const auto pos = std::upper_bound(list.begin(), list.end(), r.t_start_s,
                                    [](double t, const Reservation& x) { return t < x.t_start_s; });
  list.insert(pos, r);
}

void ReservationLedger::release_from(int owner, double now_s) {
  for (auto& [cell, list] : cells_) {
    std::erase_if(list, [&](const Reservation& r) { return r.owner == owner && r.t_start_s >= now_s - tol_; });
    for (auto& r : list) {
      if (r.owner == owner && r.t_end_s > now_s) r.t_end_s = now_s;
    }
  }
}

std::optional<int> ReservationLedger::owner_at(CellId cell, double t_s) const {
  const auto it = cells_.find(cell);
  if (it == cells_.end()) return std::nullopt;
  for (const auto& r : it->second) {
    if (r.t_start_s <= t_s && t_s < r.t_end_s) return r.owner;
  }
  return std::nullopt;
}

const std::vector<Reservation>& ReservationLedger::of_cell(CellId cell) const {
  const auto it = cells_.find(cell);
  return it == cells_.end() ? kNone : it->second;
}

std::vector<Reservation> ReservationLedger::dump() const {
  std::vector<Reservation> out;
  for (const auto& [cell, list] : cells_) out.insert(out.end(), list.begin(), list.end());
  return out;
}

bool ReservationLedger::swap_at(CellId from, CellId to, double t_s, int own) const {
  for (const auto& in : of_cell(from)) {
    if (in.owner == own || std::abs(in.t_start_s - t_s) > tol_) continue;
    for (const auto& out : of_cell(to)) {
      if (out.owner == in.owner && std::abs(out.t_end_s - t_s) <= tol_) return true;
    }
  }
  return false;
}

std::optional<Reservation> try_next_cell(int own, const Reservation& current, CellId destination,
                                         ReservationLedger& ledger, const AirspaceConfig& cfg, double cell_time_s,
                                         std::optional<CellId> preferred) {
  const double t0 = current.t_end_s;
  const double t1 = t0 + cell_time_s;
  for (CellId c : candidates(current.cell, destination, cfg, preferred)) {
    if (!ledger.grantable(c, t0, t1, own) || ledger.swap_at(current.cell, c, t0, own)) continue;
    Reservation r{c, own, t0, t1, false};
    ledger.reserve(r);
    return r;
  }
  return std::nullopt;
}

Reservation request_next_cell(int own, const Reservation& current, CellId destination, ReservationLedger& ledger,
                              const AirspaceConfig& cfg, double cell_time_s, std::optional<CellId> preferred) {
  if (auto r = try_next_cell(own, current, destination, ledger, cfg, cell_time_s, preferred)) return *r;
  Reservation hold{current.cell, own, current.t_end_s, current.t_end_s + cell_time_s, true};
  ledger.reserve(hold);
  return hold;
}

EntryResult try_entry(int own, CellId origin, CellId destination, ReservationLedger& ledger, double now_s,
                      const AirspaceConfig& cfg, double cell_time_s, double retry_s,
                      std::optional<CellId> preferred) {
  EntryResult out;
  out.next_attempt_s = now_s + retry_s;
  if (!ledger.grantable(origin, now_s, now_s + cell_time_s, own)) return out;
  const Reservation origin_res{origin, own, now_s, now_s + cell_time_s / 2.0, false};
  ledger.reserve(origin_res);
  const auto first = try_next_cell(own, origin_res, destination, ledger, cfg, cell_time_s, preferred);
  if (!first) {
    ledger.release_from(own, now_s);
    return out;
  }
  out.entered = true;
  out.origin = origin_res;
  out.first = *first;
  return out;
}

void release_on_arrival(int own, ReservationLedger& ledger, double now_s) {
  ledger.release_from(own, now_s);
  ledger.retire(own);
}

}  // namespace hexatm
