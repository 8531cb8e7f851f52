#include "hexatm/strategic.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

namespace hexatm {

namespace {

// Per-step cell ownership and directed moves of already-routed aircraft.
class Reservations {
 public:
  Reservations(std::size_t cells, int horizon)
      : cells_(cells), owner_((horizon + 1) * cells, -1), move_to_((horizon + 1) * cells, -1) {}

  bool cell_free(CellId c, int step) const { return owner_[idx(c, step)] < 0; }

  // Moving from -> to between step-1 and step would swap with someone going to -> from.
  bool swap_free(CellId from, CellId to, int step) const {
    return move_to_[idx(to, step - 1)] != static_cast<int>(from.index);
  }

  void place(const std::vector<CellId>& path, int who) {
    for (std::size_t t = 0; t < path.size(); ++t) {
      owner_[idx(path[t], static_cast<int>(t))] = who;
      if (t + 1 < path.size()) move_to_[idx(path[t], static_cast<int>(t))] = static_cast<int>(path[t + 1].index);
    }
  }

  void remove(const std::vector<CellId>& path) {
    for (std::size_t t = 0; t < path.size(); ++t) {
      owner_[idx(path[t], static_cast<int>(t))] = -1;
      move_to_[idx(path[t], static_cast<int>(t))] = -1;
    }
  }

 private:
  std::size_t idx(CellId c, int step) const { return static_cast<std::size_t>(step) * cells_ + c.index; }
  std::size_t cells_;
  std::vector<int> owner_;
  std::vector<int> move_to_;
};

class Solver {
 public:
  explicit Solver(const AllocationProblem& p)
      : p_(p), cfg_(p.airspace), horizon_(p.effective_horizon()), n_(p.missions.size()),
        res_(cfg_.cell_count(), horizon_) {
    for (CellId c : all_cells(cfg_)) nbrs_.push_back(neighbors(c, cfg_));
    dist_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (CellId c : all_cells(cfg_)) dist_[i].push_back(hex_distance(c, p.missions[i].destination, cfg_));
    }
    suffix_lb_.assign(n_ + 1, 0);
    for (std::size_t i = n_; i-- > 0;) suffix_lb_[i] = suffix_lb_[i + 1] + dist_[i][p.missions[i].origin.index];
  }

  SolveResult run() {
    seed_incumbent();
    current_.assign(n_, {});
    search(0, 0);
    SolveResult r;
    r.nodes_expanded = nodes_;
    if (best_cost_ == kInf) return r;
    r.feasible = true;
    r.plan.paths = best_;
    r.plan.objective = best_cost_;
    for (const auto& m : p_.missions) r.plan.ids.push_back(m.id);
    return r;
  }

 private:
  static constexpr int kInf = std::numeric_limits<int>::max();

  // Prioritized planning in id order gives a quick upper bound.
  void seed_incumbent() {
    Reservations local(cfg_.cell_count(), horizon_);
    std::vector<std::vector<CellId>> paths;
    int cost = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      auto path = earliest_path(i, local);
      if (path.empty()) return;
      cost += static_cast<int>(path.size()) - 1;
      local.place(path, static_cast<int>(i));
      paths.push_back(std::move(path));
    }
    best_ = std::move(paths);
    best_cost_ = cost;
  }

  std::vector<CellId> earliest_path(std::size_t i, const Reservations& r) const {
    const Mission& m = p_.missions[i];
    if (!r.cell_free(m.origin, 0)) return {};
    if (m.origin == m.destination) return {m.origin};
    const std::size_t cells = cfg_.cell_count();
    std::vector<int> parent((horizon_ + 1) * cells, -2);
    parent[m.origin.index] = -1;
    std::vector<CellId> frontier{m.origin};
    for (int t = 1; t <= horizon_ && !frontier.empty(); ++t) {
      std::vector<CellId> next;
      for (CellId c : frontier) {
        for (CellId nb : nbrs_[c.index]) {
          const std::size_t k = t * cells + nb.index;
          if (parent[k] != -2 || !r.cell_free(nb, t) || !r.swap_free(c, nb, t)) continue;
          if (nb != m.destination && t + dist_[i][nb.index] > horizon_) continue;
          parent[k] = static_cast<int>(c.index);
          if (nb == m.destination) {
            std::vector<CellId> path(t + 1);
            CellId cur = nb;
            for (int s = t; s >= 0; --s) {
              path[s] = cur;
              if (s > 0) cur = CellId{static_cast<std::uint32_t>(parent[s * cells + cur.index])};
            }
            return path;
          }
          next.push_back(nb);
        }
      }
      frontier = std::move(next);
    }
    return {};
  }

  // Budget for aircraft i's arrival step given the cost already committed.
  int budget(std::size_t i, int committed) const {
    if (best_cost_ == kInf) return horizon_;
    // Equal cost is still worth exploring until the incumbent came from this search.
    const int limit = best_from_search_ ? best_cost_ - 1 : best_cost_;
    return std::min(horizon_, limit - committed - suffix_lb_[i + 1]);
  }

  void search(std::size_t i, int committed) {
    if (i == n_) {
      if (committed < best_cost_ || (committed == best_cost_ && !best_from_search_)) {
        best_cost_ = committed;
        best_ = current_;
        best_from_search_ = true;
      }
      return;
    }
    const Mission& m = p_.missions[i];
    if (!res_.cell_free(m.origin, 0)) return;
    auto& path = current_[i];
    path.assign(1, m.origin);
    if (m.origin == m.destination) {
      res_.place(path, static_cast<int>(i));
      search(i + 1, committed);
      res_.remove(path);
      return;
    }
    extend(i, committed);
  }

  void extend(std::size_t i, int committed) {
    ++nodes_;
    auto& path = current_[i];
    const Mission& m = p_.missions[i];
    const int t = static_cast<int>(path.size());  // step being chosen
    const CellId here = path.back();
    for (CellId nb : nbrs_[here.index]) {
      if (t + dist_[i][nb.index] > budget(i, committed)) continue;
      if (!res_.cell_free(nb, t) || !res_.swap_free(here, nb, t)) continue;
      path.push_back(nb);
      if (nb == m.destination) {
        res_.place(path, static_cast<int>(i));
        search(i + 1, committed + t);
        res_.remove(path);
      } else {
        extend(i, committed);
      }
      path.pop_back();
    }
  }

  const AllocationProblem& p_;
  const AirspaceConfig& cfg_;
  int horizon_;
  std::size_t n_;
  Reservations res_;
  std::vector<std::vector<CellId>> nbrs_;
  std::vector<std::vector<int>> dist_;
  std::vector<int> suffix_lb_;
  std::vector<std::vector<CellId>> current_;
  std::vector<std::vector<CellId>> best_;
  int best_cost_ = kInf;
  bool best_from_search_ = false;
  std::uint64_t nodes_ = 0;
};

}  // namespace

int AllocationProblem::effective_horizon() const {
  if (horizon_steps > 0) return horizon_steps;
  int d = 0;
  for (const auto& m : missions) d = std::max(d, hex_distance(m.origin, m.destination, airspace));
  return d + 8;
}

void AllocationProblem::validate() const {
  airspace.validate();
  std::set<int> ids;
  std::set<CellId> origins;
  for (const auto& m : missions) {
    if (!ids.insert(m.id).second) throw std::invalid_argument("duplicate aircraft id");
    if (!origins.insert(m.origin).second) throw std::invalid_argument("duplicate origin");
    if (!is_valid(m.origin, airspace) || !is_valid(m.destination, airspace)) {
      throw std::invalid_argument("mission endpoint outside airspace");
    }
    if (!is_outer(m.origin, airspace) || !is_outer(m.destination, airspace)) {
      throw std::invalid_argument("mission endpoint not on the outer ring");
    }
  }
  if (horizon_steps < 0) throw std::invalid_argument("negative horizon");
}

SolveResult solve(const AllocationProblem& p) {
  p.validate();
  return Solver(p).run();
}

std::vector<std::string> validate_plan(const OccupancyPlan& plan, const AllocationProblem& p) {
  std::vector<std::string> out;
  const auto& cfg = p.airspace;
  if (plan.paths.size() != p.missions.size()) {
    out.emplace_back("aircraft count mismatch");
    return out;
  }
  int total = 0;
  for (std::size_t i = 0; i < plan.paths.size(); ++i) {
    const auto& path = plan.paths[i];
    const auto& m = p.missions[i];
    const std::string who = "aircraft " + std::to_string(m.id) + ": ";
    if (path.empty()) {
      out.push_back(who + "empty path");
      continue;
    }
    if (path.front() != m.origin) out.push_back(who + "origin mismatch");
    if (path.back() != m.destination) out.push_back(who + "destination mismatch");
    for (std::size_t t = 0; t < path.size(); ++t) {
      if (!is_valid(path[t], cfg)) out.push_back(who + "cell outside airspace at step " + std::to_string(t));
    }
    for (std::size_t t = 1; t < path.size(); ++t) {
      if (!is_valid(path[t], cfg) || !is_valid(path[t - 1], cfg)) continue;
      if (path[t] == path[t - 1]) {
        out.push_back(who + "hold at step " + std::to_string(t));
      } else if (!adjacent(path[t - 1], path[t], cfg)) {
        out.push_back(who + "non-adjacent move at step " + std::to_string(t));
      }
    }
    total += static_cast<int>(path.size()) - 1;
  }
  for (std::size_t a = 0; a < plan.paths.size(); ++a) {
    for (std::size_t b = a + 1; b < plan.paths.size(); ++b) {
      const auto& pa = plan.paths[a];
      const auto& pb = plan.paths[b];
      const std::size_t common = std::min(pa.size(), pb.size());
      for (std::size_t t = 0; t < common; ++t) {
        if (pa[t] == pb[t]) out.push_back("occupancy clash at step " + std::to_string(t));
        if (t + 1 < common && pa[t] == pb[t + 1] && pb[t] == pa[t + 1]) {
          out.push_back("swap at step " + std::to_string(t + 1));
        }
      }
    }
  }
  if (total != plan.objective) out.emplace_back("objective mismatch");
  return out;
}

std::vector<std::vector<Vec2>> plan_to_waypoints(const OccupancyPlan& plan, const AirspaceConfig& cfg) {
  std::vector<std::vector<Vec2>> out;
  for (const auto& path : plan.paths) {
    std::vector<Vec2> w;
    for (CellId c : path) w.push_back(centroid(c, cfg));
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace hexatm
