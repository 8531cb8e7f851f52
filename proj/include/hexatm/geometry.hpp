#pragma once

#include <cmath>
#include <numbers>

namespace hexatm {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }

/// Unit vector at `angle` radians from +x, counter-clockwise positive.
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline double bearing(const Vec2& from, const Vec2& to) { return std::atan2(to.y - from.y, to.x - from.x); }

constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

/// Wraps to [0, 2*pi).
inline double wrap_2pi(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a -= two_pi;
  return a;
}

/// Wraps to (-pi, pi].
inline double wrap_pi(double a) {
  a = wrap_2pi(a);
  if (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  return a;
}

}  // namespace hexatm
