#pragma once

#include <array>

#include "tnav/patch.hpp"
#include "tnav/vehicle.hpp"

namespace tnav {

// Non-negative roll/pitch amplitudes; both strictly below pi/2.
struct RollPitchEstimate {
  double roll = 0.0;
  double pitch = 0.0;
};

// Bilinear lookup of the patch at the four body-frame wheel offsets (the
// patch is already yaw-aligned). Index order: FL, RL, RR, FR. Throws
// SpecError when the footprint does not fit inside the patch.
std::array<double, 4> wheel_heights(const TerrainPatch& patch, const VehicleGeometry& geom);

// Deterministic footprint stability estimate from the wheel heights:
//   roll  = 1/2 |atan((h1-h4)/d14) + atan((h2-h3)/d23)|   (lateral pairs)
//   pitch = 1/2 |atan((h1-h2)/d12) + atan((h4-h3)/d43)|   (longitudinal pairs)
RollPitchEstimate roll_pitch(const TerrainPatch& patch, const VehicleGeometry& geom);

}  // namespace tnav
