#include "hexatm/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace hexatm {

namespace {

constexpr double kCos30 = 0.86602540378443864676;
constexpr double kTieTolerance = 1e-6;

CubeCoord cube_round(double fx, double fy, double fz) {
  double rx = std::round(fx);
  double ry = std::round(fy);
  double rz = std::round(fz);
  const double dx = std::abs(rx - fx);
  const double dy = std::abs(ry - fy);
  const double dz = std::abs(rz - fz);
  if (dx > dy && dx > dz) {
    rx = -ry - rz;
  } else if (dy > dz) {
    ry = -rx - rz;
  } else {
    rz = -rx - ry;
  }
  return {static_cast<int>(rx), static_cast<int>(ry), static_cast<int>(rz)};
}

void require_valid(CellId id, const AirspaceConfig& cfg) {
  if (!is_valid(id, cfg)) {
    throw std::domain_error("cell index " + std::to_string(id.index) + " outside airspace of " +
                            std::to_string(cfg.cell_count()) + " cells");
  }
}

}  // namespace

void AirspaceConfig::validate() const {
  if (radius_rings < 1) throw std::domain_error("radius_rings must be positive");
  if (!(centroid_spacing_m > 0.0)) throw std::domain_error("centroid_spacing_m must be positive");
}

std::uint32_t AirspaceConfig::cell_count() const {
  return static_cast<std::uint32_t>(1 + 3 * radius_rings * (radius_rings + 1));
}

double direction_angle(int k) { return deg2rad(90.0 - 60.0 * static_cast<double>(((k % 6) + 6) % 6)); }

int ring_of(const CubeCoord& c) { return std::max({std::abs(c.x), std::abs(c.y), std::abs(c.z)}); }

int cube_distance(const CubeCoord& a, const CubeCoord& b) {
  const CubeCoord d = a - b;
  return (std::abs(d.x) + std::abs(d.y) + std::abs(d.z)) / 2;
}

bool is_valid(CellId id, const AirspaceConfig& cfg) { return id.index < cfg.cell_count(); }

CubeCoord cell_to_cube(CellId id, const AirspaceConfig& cfg) {
  require_valid(id, cfg);
  if (id.index == 0) return {};
  int r = 1;
  while (ring_start(r + 1) <= id.index) ++r;
  const int pos = static_cast<int>(id.index - ring_start(r));
  const int side = pos / r;
  const int step = pos % r;
  return kCubeDirections[side] * r + kCubeDirections[(side + 2) % 6] * step;
}

std::optional<CellId> cube_to_cell(const CubeCoord& c, const AirspaceConfig& cfg) {
  if (c.x + c.y + c.z != 0) return std::nullopt;
  const int r = ring_of(c);
  if (r > cfg.radius_rings) return std::nullopt;
  if (r == 0) return CellId{0};
  for (int side = 0; side < 6; ++side) {
    const CubeCoord rest = c - kCubeDirections[side] * r;
    const CubeCoord dir = kCubeDirections[(side + 2) % 6];
    // rest must be step * dir with 0 <= step < r
    for (int step = 0; step < r; ++step) {
      if (dir * step == rest) {
        return CellId{ring_start(r) + static_cast<std::uint32_t>(side * r + step)};
      }
    }
  }
  return std::nullopt;
}

int ring_of(CellId id, const AirspaceConfig& cfg) { return ring_of(cell_to_cube(id, cfg)); }

bool is_outer(CellId id, const AirspaceConfig& cfg) { return ring_of(id, cfg) == cfg.radius_rings; }

Vec2 cube_centroid(const CubeCoord& c, const AirspaceConfig& cfg) {
  const double s = cfg.centroid_spacing_m;
  return {s * kCos30 * c.x, s * (0.5 * c.x + c.y)};
}

Vec2 centroid(CellId id, const AirspaceConfig& cfg) { return cube_centroid(cell_to_cube(id, cfg), cfg); }

std::vector<CellId> neighbors(CellId id, const AirspaceConfig& cfg) {
  const CubeCoord c = cell_to_cube(id, cfg);
  std::vector<CellId> out;
  out.reserve(6);
  for (const auto& d : kCubeDirections) {
    if (auto n = cube_to_cell(c + d, cfg)) out.push_back(*n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool adjacent(CellId a, CellId b, const AirspaceConfig& cfg) { return hex_distance(a, b, cfg) == 1; }

int direction_between(CellId from, CellId to, const AirspaceConfig& cfg) {
  const CubeCoord d = cell_to_cube(to, cfg) - cell_to_cube(from, cfg);
  for (int k = 0; k < 6; ++k) {
    if (kCubeDirections[k] == d) return k;
  }
  return -1;
}

int hex_distance(CellId a, CellId b, const AirspaceConfig& cfg) {
  return cube_distance(cell_to_cube(a, cfg), cell_to_cube(b, cfg));
}

std::optional<CellId> locate(const Vec2& p, const AirspaceConfig& cfg) {
  const double s = cfg.centroid_spacing_m;
  const double fx = p.x / (s * kCos30);
  const double fy = p.y / s - 0.5 * fx;
  const CubeCoord base = cube_round(fx, fy, -fx - fy);

  std::array<CubeCoord, 7> candidates{};
  candidates[0] = base;
  for (int k = 0; k < 6; ++k) candidates[k + 1] = base + kCubeDirections[k];

  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) best = std::min(best, distance(p, cube_centroid(c, cfg)));

  std::optional<CellId> chosen;
  for (const auto& c : candidates) {
    if (distance(p, cube_centroid(c, cfg)) > best + kTieTolerance) continue;
    if (auto id = cube_to_cell(c, cfg)) {
      if (!chosen || *id < *chosen) chosen = id;
    }
  }
  return chosen;
}

std::vector<CellId> all_cells(const AirspaceConfig& cfg) {
  std::vector<CellId> out(cfg.cell_count());
  for (std::uint32_t i = 0; i < out.size(); ++i) out[i] = CellId{i};
  return out;
}

std::vector<CellId> outer_ring(const AirspaceConfig& cfg) {
  std::vector<CellId> out;
  const std::uint32_t first = ring_start(cfg.radius_rings);
  for (std::uint32_t i = first; i < cfg.cell_count(); ++i) out.push_back(CellId{i});
  return out;
}

}  // namespace hexatm
