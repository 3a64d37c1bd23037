#include "tnav/tracker.hpp"

#include <algorithm>
#include <cmath>

#include "tnav/error.hpp"
#include "tnav/geometry.hpp"

namespace tnav {

Command track_path(const GridPath& path, const VehicleState& state, double lookahead,
                   const TrackerGains& gains) {
  if (path.waypoints.empty()) throw SpecError("track_path: empty path");
  if (!(lookahead > 0.0)) throw SpecError("track_path: lookahead must be > 0");

  const auto& last = path.waypoints.back();
  if (hypot2(last[0] - state.x, last[1] - state.y) <= gains.goal_tolerance) {
    return {0.0, 0.0};
  }

  // First waypoint at or beyond the lookahead distance; fall back to the
  // terminal waypoint when the remaining path is shorter.
  const std::array<double, 2>* target = &path.waypoints.back();
  for (const auto& wp : path.waypoints) {
    if (hypot2(wp[0] - state.x, wp[1] - state.y) >= lookahead) {
      target = &wp;
      break;
    }
  }

  const double dx = (*target)[0] - state.x;
  const double dy = (*target)[1] - state.y;
  const double dist = std::max(hypot2(dx, dy), 1e-9);
  const double heading_err = wrap_angle(std::atan2(dy, dx) - state.yaw);

  const double v = gains.cruise_speed *
                   std::max(gains.min_speed_factor, std::cos(heading_err));
  // Pure-pursuit curvature toward the target point.
  const double curvature = 2.0 * std::sin(heading_err) / std::max(dist, lookahead);
  const double omega = v * curvature;

  return {std::clamp(v, -gains.v_max, gains.v_max),
          std::clamp(omega, -gains.omega_max, gains.omega_max)};
}

}  // namespace tnav
