#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hexatm/lattice.hpp"

namespace hexatm {

struct Mission {
  int id = 0;
  CellId origin;
  CellId destination;
};

struct AllocationProblem {
  AirspaceConfig airspace;
  std::vector<Mission> missions;
  int horizon_steps = 0;  // 0 selects max mission distance + 8

  [[nodiscard]] int effective_horizon() const;
  /// Throws std::invalid_argument on duplicate ids/origins or endpoints off the outer ring.
  void validate() const;
};

/// Cells occupied at steps 0, 1, 2, ... per mission (same order as the
/// problem). The last cell is the destination; the aircraft exits after it.
struct OccupancyPlan {
  std::vector<int> ids;
  std::vector<std::vector<CellId>> paths;
  int objective = 0;

  [[nodiscard]] int arrival_step(std::size_t i) const { return static_cast<int>(paths[i].size()) - 1; }
};

struct SolveResult {
  bool feasible = false;
  OccupancyPlan plan;
  std::uint64_t nodes_expanded = 0;
};

/// Minimum sum of arrival steps, one aircraft per cell per step, no holds,
/// no swaps. Among optimal plans the lexicographically smallest by
/// (aircraft order, step, cell index) is returned.
SolveResult solve(const AllocationProblem& p);

/// Empty when the plan is valid for `p`.
std::vector<std::string> validate_plan(const OccupancyPlan& plan, const AllocationProblem& p);

std::vector<std::vector<Vec2>> plan_to_waypoints(const OccupancyPlan& plan, const AirspaceConfig& cfg);

}  // namespace hexatm
