#pragma once

#include "tnav/astar.hpp"
#include "tnav/vehicle.hpp"

namespace tnav {

struct TrackerGains {
  double cruise_speed = 0.5;
  double goal_tolerance = 0.1;    // meters around the terminal waypoint
  double min_speed_factor = 0.1;  // keeps turning authority at large heading error
  double v_max = 1.0;
  double omega_max = 2.0;
};

// Pure-pursuit tracking of a grid path: steer toward the first waypoint past
// the lookahead distance, slowing with heading error; zero command inside the
// goal tolerance. Throws SpecError on an empty path.
Command track_path(const GridPath& path, const VehicleState& state, double lookahead,
                   const TrackerGains& gains);

}  // namespace tnav
