#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "hexatm/lattice.hpp"

namespace hexatm {

struct Reservation {
  CellId cell;
  int owner = 0;
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  bool hold = false;  // holding orbit in the owner's current cell
};

/// Timed cell ownership. Intervals are half-open, so back-to-back
/// reservations of the same cell by different owners do not overlap.
class ReservationLedger {
 public:
  explicit ReservationLedger(double tolerance_s = 1e-6) : tol_(tolerance_s) {}

  /// True when no owner other than `except_owner` holds `cell` during [t0, t1).
  [[nodiscard]] bool is_free(CellId cell, double t0, double t1, int except_owner = -1) const;
  /// Stricter than is_free: `own` must also end up last in line for the cell,
  /// behind owners that already hold a successor, so that it can always
  /// extend its own interval with a holding orbit.
  [[nodiscard]] bool grantable(CellId cell, double t0, double t1, int own) const;
  /// An open reservation is its owner's latest: nothing starts where it ends.
  [[nodiscard]] bool is_open(const Reservation& r) const;
  /// Records `r`; throws std::logic_error if it overlaps another owner.
  void reserve(const Reservation& r);
  /// Drops reservations starting at or after `now_s` and ends the active one at `now_s`.
  void release_from(int owner, double now_s);
  /// Marks `owner` as gone for good; its reservations no longer count as open.
  void retire(int owner);

  [[nodiscard]] std::optional<int> owner_at(CellId cell, double t_s) const;
  [[nodiscard]] const std::vector<Reservation>& of_cell(CellId cell) const;
  /// Every reservation ordered by (cell, t_start).
  [[nodiscard]] std::vector<Reservation> dump() const;
  /// True when some other owner moves from `to` into `from` exactly at `t_s`.
  [[nodiscard]] bool swap_at(CellId from, CellId to, double t_s, int own) const;

 private:
  double tol_;
  std::map<CellId, std::vector<Reservation>> cells_;
  std::set<int> retired_;
};

/// Grants the cell after `current`: the first in-airspace neighbor (preferred
/// cell first, then by distance to destination and index) grantable for one
/// cell time from current.t_end_s, else a holding orbit in current.cell.
Reservation request_next_cell(int own, const Reservation& current, CellId destination, ReservationLedger& ledger,
                              const AirspaceConfig& cfg, double cell_time_s,
                              std::optional<CellId> preferred = std::nullopt);

/// Like request_next_cell, but never falls back to holding.
std::optional<Reservation> try_next_cell(int own, const Reservation& current, CellId destination,
                                         ReservationLedger& ledger, const AirspaceConfig& cfg, double cell_time_s,
                                         std::optional<CellId> preferred = std::nullopt);

struct EntryResult {
  bool entered = false;
  double next_attempt_s = 0.0;  // meaningful when not entered
  Reservation origin;           // [now, now + T/2]: centroid to border
  Reservation first;            // the cell after the origin
};

/// Enters when the origin cell is grantable for a full cell time and a first
/// cell can be granted; otherwise reports when to try again.
EntryResult try_entry(int own, CellId origin, CellId destination, ReservationLedger& ledger, double now_s,
                      const AirspaceConfig& cfg, double cell_time_s, double retry_s = 40.0,
                      std::optional<CellId> preferred = std::nullopt);

/// Frees everything `own` holds from `now_s` on and retires it.
void release_on_arrival(int own, ReservationLedger& ledger, double now_s);

}  // namespace hexatm
