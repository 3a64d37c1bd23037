#pragma once

#include <cmath>

namespace tnav {

inline constexpr double kPi = 3.14159265358979323846;

// Wraps an angle to [-pi, pi).
inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Rotates (x, y) counterclockwise by yaw.
inline Vec2 rotate(const Vec2& p, double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

inline double hypot2(double dx, double dy) { return std::sqrt(dx * dx + dy * dy); }

}  // namespace tnav
