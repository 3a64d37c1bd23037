#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tnav/patch.hpp"
#include "tnav/simulator.hpp"

namespace tnav {

inline constexpr std::uint8_t kRecordVelocity = 0;  // targets (dv, domega)
inline constexpr std::uint8_t kRecordPose = 1;      // targets (dx, dy, droll, dpitch)

// Flat sample store: patches are patch_cells^2 f32 each (row-major, vehicle
// forward first), targets are target_dim f32 each.
struct Dataset {
  std::uint8_t kind = kRecordVelocity;
  int patch_cells = 0;
  int target_dim = 2;
  std::vector<float> patches;
  std::vector<float> targets;

  std::size_t size() const {
    return patch_cells == 0 ? 0
                            : patches.size() / (static_cast<std::size_t>(patch_cells) * patch_cells);
  }
  const float* patch(std::size_t i) const {
    return patches.data() + i * static_cast<std::size_t>(patch_cells) * patch_cells;
  }
  const float* target(std::size_t i) const { return targets.data() + i * target_dim; }

  void append(const TerrainPatch& p, const float* target_values);
};

// Ornstein-Uhlenbeck-style bounded random walk over (v, omega) commands.
struct RandomWalkPolicy {
  double v_mean = 0.5;
  double theta = 0.8;       // mean reversion rate, 1/s
  double sigma_v = 0.5;     // diffusion of the v command
  double sigma_omega = 1.0; // diffusion of the omega command

  Command initial() const { return {v_mean, 0.0}; }
  Command step(const Command& prev, const SimParams& params, Rng& rng) const;
};

struct CollectStats {
  std::size_t velocity_samples = 0;
  std::size_t velocity_dropped = 0;
  std::size_t pose_samples = 0;
  std::size_t pose_dropped = 0;
};

struct CollectResult {
  Dataset velocity;  // per-step (commanded - realized) pairs
  Dataset pose;      // per-window nominal-minus-simulated (x, y, roll, pitch)
  CollectStats stats;
};

struct CollectConfig {
  int steps_per_map = 1500;
  int horizon = kPredictionHorizon;  // pose-uncertainty window length
  int pose_stride = 5;               // window start spacing in steps
};

// Drives the simulator over every map with the random-walk policy, recording
// velocity-discrepancy samples each step and pose-discrepancy samples per
// horizon window. Deterministic in (inputs, seed); episodes are re-seeded per
// map and merged in (map index, step index) order. Samples whose patches exit
// the map are dropped and counted.
CollectResult collect_dataset(const std::vector<ElevationMap>& maps, const CollectConfig& cfg,
                              const RandomWalkPolicy& policy, const VehicleGeometry& geom,
                              const SimParams& params, const PatchSpec& spec, std::uint64_t seed);

// TNTD record-stream format: magic "TNTD", u16 version=1, u8 record kind,
// u32 patch_cells, u32 count, then per record patch f32s followed by target
// f32s. (patch_cells is carried in the header so the stream is
// self-describing.)
void write_dataset(const Dataset& ds, const std::string& path);
Dataset read_dataset(const std::string& path);

}  // namespace tnav
