#include "tnav/stability.hpp"

#include <cmath>

namespace tnav {

std::array<double, 4> wheel_heights(const TerrainPatch& patch, const VehicleGeometry& geom) {
  std::array<double, 4> h;
  for (int i = 0; i < 4; ++i) {
    h[i] = patch_height_at(patch, geom.wheels[i].x, geom.wheels[i].y);
  }
  return h;
}

RollPitchEstimate roll_pitch(const TerrainPatch& patch, const VehicleGeometry& geom) {
  const auto h = wheel_heights(patch, geom);
  // Zero-based wheel indices: 0=FL, 1=RL, 2=RR, 3=FR.
  const double roll_sum = std::atan((h[0] - h[3]) / geom.wheel_distance(0, 3)) +
                          std::atan((h[1] - h[2]) / geom.wheel_distance(1, 2));
  const double pitch_sum = std::atan((h[0] - h[1]) / geom.wheel_distance(0, 1)) +
                           std::atan((h[3] - h[2]) / geom.wheel_distance(3, 2));
  RollPitchEstimate est;
  est.roll = 0.5 * std::abs(roll_sum);
  est.pitch = 0.5 * std::abs(pitch_sum);
  return est;
}

}  // namespace tnav
