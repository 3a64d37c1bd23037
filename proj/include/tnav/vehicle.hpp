#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "tnav/geometry.hpp"

namespace tnav {

// Wheel indexing: 1 = front-left, 2 = rear-left, 3 = rear-right,
// 4 = front-right, in the body frame (x forward, y left). Stored zero-based.
struct VehicleGeometry {
  double wheelbase = 0.31;
  double track = 0.20;
  double clearance = 0.08;
  std::array<Vec2, 4> wheels = {};

  static VehicleGeometry box(double wheelbase, double track, double clearance);

  double wheel_distance(int i, int j) const {
    return hypot2(wheels[i].x - wheels[j].x, wheels[i].y - wheels[j].y);
  }

  void validate() const;  // throws SpecError
};

struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double roll = 0.0;   // > 0 when the left side is higher
  double pitch = 0.0;  // > 0 when the nose is higher
  double yaw = 0.0;    // [-pi, pi), forward = (cos yaw, sin yaw)
  double v = 0.0;      // body-frame linear velocity, m/s
  double omega = 0.0;  // yaw rate, rad/s
};

struct Command {
  double v = 0.0;
  double omega = 0.0;
};

struct SimParams {
  double dt = 0.1;
  double slip_gain = 0.8;          // velocity loss per unit uphill slope
  double roughness_gain = 8.0;     // noise sigma per unit footprint height variance
  double actuation_tau = 0.2;      // first-order command lag, seconds
  double stuck_slope = 0.7;        // slope above which speed saturates toward 0
  double rollover_threshold = kPi / 4.0;  // radians of roll or pitch
  double v_max = 1.0;
  double omega_max = 2.0;

  void validate() const;  // throws SpecError

  Command clamp(const Command& c) const {
    return {std::clamp(c.v, -v_max, v_max), std::clamp(c.omega, -omega_max, omega_max)};
  }
};

}  // namespace tnav
