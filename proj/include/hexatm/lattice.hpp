#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <optional>
#include <vector>

#include "hexatm/geometry.hpp"

namespace hexatm {

// Cube hex coordinates. Neighbor direction k (0..5) points at 90 - 60k degrees
// from +x, so direction 0 is straight up.
struct CubeCoord {
  int x = 0;
  int y = 0;
  int z = 0;

  constexpr CubeCoord operator+(const CubeCoord& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr CubeCoord operator-(const CubeCoord& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr CubeCoord operator*(int s) const { return {x * s, y * s, z * s}; }
  constexpr auto operator<=>(const CubeCoord&) const = default;
};

struct CellId {
  std::uint32_t index = 0;
  constexpr auto operator<=>(const CellId&) const = default;
};

struct AirspaceConfig {
  int radius_rings = 2;
  double centroid_spacing_m = 4000.0;

  /// Throws std::domain_error when a field is out of range.
  void validate() const;
  [[nodiscard]] std::uint32_t cell_count() const;
  [[nodiscard]] double apothem_m() const { return centroid_spacing_m / 2.0; }
};

inline constexpr std::array<CubeCoord, 6> kCubeDirections = {{
    {0, 1, -1},   // 90 deg
    {1, 0, -1},   // 30 deg
    {1, -1, 0},   // -30 deg
    {0, -1, 1},   // -90 deg
    {-1, 0, 1},   // -150 deg
    {-1, 1, 0},   // 150 deg
}};

/// Heading (radians) of neighbor direction k.
double direction_angle(int k);

int ring_of(const CubeCoord& c);
int cube_distance(const CubeCoord& a, const CubeCoord& b);

/// First index of ring r (r >= 1).
constexpr std::uint32_t ring_start(int r) { return r == 0 ? 0u : static_cast<std::uint32_t>(1 + 3 * r * (r - 1)); }

CubeCoord cell_to_cube(CellId id, const AirspaceConfig& cfg);
/// Returns nullopt when the cube coordinate lies outside the airspace.
std::optional<CellId> cube_to_cell(const CubeCoord& c, const AirspaceConfig& cfg);

int ring_of(CellId id, const AirspaceConfig& cfg);
bool is_valid(CellId id, const AirspaceConfig& cfg);
bool is_outer(CellId id, const AirspaceConfig& cfg);

Vec2 cube_centroid(const CubeCoord& c, const AirspaceConfig& cfg);
Vec2 centroid(CellId id, const AirspaceConfig& cfg);

/// In-airspace neighbors, ascending by index.
std::vector<CellId> neighbors(CellId id, const AirspaceConfig& cfg);
bool adjacent(CellId a, CellId b, const AirspaceConfig& cfg);

/// Neighbor direction k (0..5) leading from `from` to `to`, or -1 if not adjacent.
int direction_between(CellId from, CellId to, const AirspaceConfig& cfg);

int hex_distance(CellId a, CellId b, const AirspaceConfig& cfg);

/// Cell whose centroid is nearest to p, or nullopt when p lies outside every
/// cell. Ties resolve to the lower index.
std::optional<CellId> locate(const Vec2& p, const AirspaceConfig& cfg);

std::vector<CellId> all_cells(const AirspaceConfig& cfg);
std::vector<CellId> outer_ring(const AirspaceConfig& cfg);

}  // namespace hexatm
