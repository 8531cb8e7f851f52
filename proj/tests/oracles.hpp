#pragma once

// Independent reference implementations shared by unit and acceptance tests.

#include <algorithm>
#include <limits>
#include <map>
#include <tuple>

#include "hexatm/strategic.hpp"

namespace oracle {

// Exhaustive dynamic program over joint states of two aircraft on the
// time-expanded graph. Returns the minimum sum of arrival steps or -1.
inline int joint_optimum(const hexatm::AllocationProblem& p) {
  using hexatm::CellId;
  const auto& cfg = p.airspace;
  const int horizon = p.effective_horizon();
  const auto& m0 = p.missions.at(0);
  const auto& m1 = p.missions.at(1);
  constexpr int kDone = -1;

  // state: (cell0 or done, cell1 or done) -> cheapest cost so far
  using State = std::pair<int, int>;
  std::map<State, int> layer;
  State start{static_cast<int>(m0.origin.index), static_cast<int>(m1.origin.index)};
  if (m0.origin == m0.destination) start.first = kDone;
  if (m1.origin == m1.destination) start.second = kDone;
  layer[start] = 0;

  int best = -1;
  auto options = [&](int at, const hexatm::Mission& m) {
    std::vector<int> out;
    if (at == kDone) {
      out.push_back(kDone);
      return out;
    }
    for (CellId nb : hexatm::neighbors(CellId{static_cast<std::uint32_t>(at)}, cfg)) {
      out.push_back(static_cast<int>(nb.index));
      if (nb == m.destination) out.push_back(-2 - static_cast<int>(nb.index));  // arrive here
    }
    return out;
  };

  for (int t = 0; t <= horizon; ++t) {
    std::map<State, int> next;
    for (const auto& [s, cost] : layer) {
      if (s.first == kDone && s.second == kDone) {
        best = best < 0 ? cost : std::min(best, cost);
        continue;
      }
      if (t == horizon) continue;
      const int active = (s.first != kDone) + (s.second != kDone);
      for (int a : options(s.first, m0)) {
        for (int b : options(s.second, m1)) {
          const int ca = a <= -2 ? -2 - a : a;
          const int cb = b <= -2 ? -2 - b : b;
          if (ca >= 0 && cb >= 0 && ca == cb) continue;  // same cell at t+1
          if (s.first >= 0 && s.second >= 0 && ca == s.second && cb == s.first) continue;  // swap
          State ns{a <= -2 ? kDone : a, b <= -2 ? kDone : b};
          const int nc = cost + active;
          auto it = next.find(ns);
          if (it == next.end() || nc < it->second) next[ns] = nc;
        }
      }
    }
    layer = std::move(next);
  }
  for (const auto& [s, cost] : layer) {
    if (s.first == kDone && s.second == kDone) best = best < 0 ? cost : std::min(best, cost);
  }
  return best;
}

}  // namespace oracle
