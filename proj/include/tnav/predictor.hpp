#pragma once

#include <span>
#include <vector>

#include "tnav/elevation_map.hpp"
#include "tnav/settle.hpp"
#include "tnav/vehicle.hpp"

namespace tnav {

inline constexpr int kPredictionHorizon = 25;

// One step of the deterministic nominal model: first-order actuation lag
// toward the commanded pair, slip reduction on uphill slopes with hard
// saturation above the stuck threshold, planar unicycle integration, then
// quasi-static re-settling of z/roll/pitch. Throws BoundsError when the pose
// leaves terrain the wheels can be settled on.
VehicleState nominal_step(const VehicleState& state, const Command& cmd, const ElevationMap& map,
                          const VehicleGeometry& geom, const SimParams& params);

// Terrain slope along the heading at (x, y), central difference over half a
// wheelbase; probes are clamped to the map extent.
double slope_along_heading(const ElevationMap& map, double x, double y, double yaw,
                           const VehicleGeometry& geom);

// Deterministic speed multiplier applied to the lagged velocity: slip
// proportional to uphill slope, saturating near zero above the stuck slope.
double speed_factor(double slope, const SimParams& params);

struct RolloutResult {
  std::vector<VehicleState> states;  // one per completed step
  bool exited = false;               // rollout left the map before finishing
  int exit_index = -1;               // index of the first step that failed
};

// Multi-step nominal prediction; no stochastic terms.
RolloutResult predict_rollout(const VehicleState& start, std::span<const Command> commands,
                              const ElevationMap& map, const VehicleGeometry& geom,
                              const SimParams& params);

namespace detail {
// Shared step core. Additive noise enters after the deterministic speed
// factor; with zero noise the result is bitwise identical to nominal_step.
// In clamped mode the pose is kept inside the extent and wheel probes clamp
// instead of throwing.
VehicleState step_core(const VehicleState& state, const Command& cmd, const ElevationMap& map,
                       const VehicleGeometry& geom, const SimParams& params, double noise_v,
                       double noise_omega, bool clamped);
}  // namespace detail

}  // namespace tnav
