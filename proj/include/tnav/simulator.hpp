#pragma once

#include "tnav/predictor.hpp"
#include "tnav/rng.hpp"

namespace tnav {

// Population variance of heights sampled on a fixed 6x6 grid spanning the
// rotated wheel footprint; the roughness proxy driving the simulator's slip
// noise (sigma = roughness_gain * variance). Probes clamp to the map extent.
double footprint_height_variance(const ElevationMap& map, double x, double y, double yaw,
                                 const VehicleGeometry& geom);

// Ground-truth step: the nominal dynamics plus Gaussian slip noise on
// (v, omega). With zero noise gain this reproduces nominal_step bit for bit.
// Failure states (rollover, stuck) are visible in the returned state; the
// pose is clamped to the map extent rather than throwing.
VehicleState simulate_step(const VehicleState& state, const Command& cmd, const ElevationMap& map,
                           const VehicleGeometry& geom, const SimParams& params, Rng& rng);

}  // namespace tnav
