#pragma once

#include "tnav/elevation_map.hpp"
#include "tnav/vehicle.hpp"

namespace tnav {

struct SettleResult {
  double z = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
};

// Quasi-static pose on the terrain: reads the four wheel ground heights at
// the yaw-rotated body offsets, fits the least-squares plane through the
// contact points, and reports the plane's body-frame inclinations.
// z is the plane height under the body center plus the clearance.
// Throws BoundsError when a wheel leaves the map extent.
SettleResult settle_pose(const ElevationMap& map, double x, double y, double yaw,
                         const VehicleGeometry& geom);

// As settle_pose but wheel probes clamp to the map extent; used by the
// simulator, which must not throw at the boundary.
SettleResult settle_pose_clamped(const ElevationMap& map, double x, double y, double yaw,
                                 const VehicleGeometry& geom);

}  // namespace tnav
