#include "tnav/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "serial.hpp"
#include "tnav/error.hpp"
#include "tnav/geometry.hpp"

namespace tnav {

void Dataset::append(const TerrainPatch& p, const float* target_values) {
  if (patch_cells == 0) patch_cells = p.patch_cells;
  if (p.patch_cells != patch_cells) throw SpecError("dataset patch size mismatch");
  patches.reserve(patches.size() + p.cells.size());
  for (const double c : p.cells) patches.push_back(static_cast<float>(c));
  targets.insert(targets.end(), target_values, target_values + target_dim);
}

Command RandomWalkPolicy::step(const Command& prev, const SimParams& params, Rng& rng) const {
  const double dt = params.dt;
  const double sq = std::sqrt(dt);
  Command next;
  next.v = prev.v + theta * (v_mean - prev.v) * dt + sigma_v * sq * draw_gaussian(rng, 0.0, 1.0);
  next.omega = prev.omega + theta * (0.0 - prev.omega) * dt +
               sigma_omega * sq * draw_gaussian(rng, 0.0, 1.0);
  return params.clamp(next);
}

namespace {

// Steers the walk back toward the map center once the pose nears the border
// band where patches stop extracting. Returns true when it snapped the yaw;
// pose-uncertainty windows spanning a snap are invalid and get dropped.
bool bounce_if_near_border(VehicleState& state, const ElevationMap& map, double margin_m) {
  const double lo_x = map.origin_x + margin_m;
  const double hi_x = map.origin_x + map.extent_x() - margin_m;
  const double lo_y = map.origin_y + margin_m;
  const double hi_y = map.origin_y + map.extent_y() - margin_m;
  if (state.x > lo_x && state.x < hi_x && state.y > lo_y && state.y < hi_y) return false;
  const double cx = map.origin_x + map.extent_x() / 2.0;
  const double cy = map.origin_y + map.extent_y() / 2.0;
  state.yaw = wrap_angle(std::atan2(cy - state.y, cx - state.x));
  return true;
}

}  // namespace

CollectResult collect_dataset(const std::vector<ElevationMap>& maps, const CollectConfig& cfg,
                              const RandomWalkPolicy& policy, const VehicleGeometry& geom,
                              const SimParams& params, const PatchSpec& spec, std::uint64_t seed) {
  if (maps.empty()) throw SpecError("collect_dataset: maps list is empty");
  if (cfg.steps_per_map < cfg.horizon) {
    throw SpecError("collect_dataset: steps_per_map must be >= the prediction horizon");
  }
  if (cfg.pose_stride < 1) throw SpecError("collect_dataset: pose_stride must be >= 1");
  spec.validate();
  params.validate();

  CollectResult out;
  out.velocity.kind = kRecordVelocity;
  out.velocity.target_dim = 2;
  out.pose.kind = kRecordPose;
  out.pose.target_dim = 4;

  const double margin_m = (patch_margin_cells(spec) + 1) * maps[0].resolution;

  for (std::size_t mi = 0; mi < maps.size(); ++mi) {
    const ElevationMap& map = maps[mi];
    Rng rng(derive_seed(seed, mi));

    VehicleState state;
    state.x = map.origin_x + map.extent_x() / 2.0;
    state.y = map.origin_y + map.extent_y() / 2.0;
    state.yaw = wrap_angle(draw_uniform(rng, -kPi, kPi));
    Command cmd = policy.initial();
    state.v = cmd.v;
    state.omega = cmd.omega;
    {
      const SettleResult s = settle_pose_clamped(map, state.x, state.y, state.yaw, geom);
      state.z = s.z;
      state.roll = s.roll;
      state.pitch = s.pitch;
    }

    // Ring of (state, command) pairs for the pose-uncertainty windows.
    std::deque<VehicleState> window_states;
    std::deque<Command> window_cmds;
    int last_bounce_step = -1;

    for (int step = 0; step < cfg.steps_per_map; ++step) {
      cmd = policy.step(cmd, params, rng);
      window_states.push_back(state);
      window_cmds.push_back(cmd);

      // Per-step velocity-discrepancy sample at the pre-step pose.
      bool have_patch = false;
      TerrainPatch patch;
      try {
        patch = extract_patch(map, map.cell_m(state.x), map.cell_n(state.y), state.yaw, spec);
        have_patch = true;
      } catch (const BoundsError&) {
        ++out.stats.velocity_dropped;
      }

      const VehicleState next = simulate_step(state, cmd, map, geom, params, rng);
      if (have_patch) {
        const float target[2] = {static_cast<float>(cmd.v - next.v),
                                 static_cast<float>(cmd.omega - next.omega)};
        out.velocity.append(patch, target);
        ++out.stats.velocity_samples;
      }
      state = next;

      // Pose-discrepancy window ending at this step.
      if (static_cast<int>(window_states.size()) > cfg.horizon) {
        window_states.pop_front();
        window_cmds.pop_front();
      }
      if (static_cast<int>(window_states.size()) == cfg.horizon &&
          (step + 1 - cfg.horizon) % cfg.pose_stride == 0) {
        const int window_start = step + 1 - cfg.horizon;
        const VehicleState& start = window_states.front();
        bool ok = last_bounce_step < window_start;  // no yaw snap inside the window
        TerrainPatch start_patch;
        try {
          if (ok) {
            start_patch =
                extract_patch(map, map.cell_m(start.x), map.cell_n(start.y), start.yaw, spec);
          }
        } catch (const BoundsError&) {
          ok = false;
        }
        if (ok) {
          const std::vector<Command> cmds(window_cmds.begin(), window_cmds.end());
          const RolloutResult pred = predict_rollout(start, cmds, map, geom, params);
          if (!pred.exited && !pred.states.empty()) {
            const VehicleState& p = pred.states.back();
            const float target[4] = {static_cast<float>(p.x - state.x),
                                     static_cast<float>(p.y - state.y),
                                     static_cast<float>(p.roll - state.roll),
                                     static_cast<float>(p.pitch - state.pitch)};
            out.pose.append(start_patch, target);
            ++out.stats.pose_samples;
          } else {
            ++out.stats.pose_dropped;
          }
        } else {
          ++out.stats.pose_dropped;
        }
      }

      if (bounce_if_near_border(state, map, margin_m)) last_bounce_step = step;
    }
  }
  return out;
}

namespace {
constexpr char kMagic[4] = {'T', 'N', 'T', 'D'};
constexpr std::uint16_t kVersion = 1;
}  // namespace

void write_dataset(const Dataset& ds, const std::string& path) {
  serial::Writer w(path);
  w.magic(kMagic);
  w.u16(kVersion);
  w.u8(ds.kind);
  w.u32(static_cast<std::uint32_t>(ds.patch_cells));
  w.u32(static_cast<std::uint32_t>(ds.size()));
  const std::size_t n = ds.size();
  const std::size_t cells = static_cast<std::size_t>(ds.patch_cells) * ds.patch_cells;
  for (std::size_t i = 0; i < n; ++i) {
    const float* p = ds.patch(i);
    for (std::size_t c = 0; c < cells; ++c) w.f32(p[c]);
    const float* t = ds.target(i);
    for (int c = 0; c < ds.target_dim; ++c) w.f32(t[c]);
  }
  w.close();
}

Dataset read_dataset(const std::string& path) {
  serial::Reader r(path);
  r.expect_magic(kMagic);
  const std::uint16_t version = r.u16("version");
  if (version != kVersion) {
    throw FormatError("unsupported TNTD version " + std::to_string(version) + " in " + path);
  }
  Dataset ds;
  ds.kind = r.u8("record kind");
  if (ds.kind != kRecordVelocity && ds.kind != kRecordPose) {
    throw FormatError("unknown TNTD record kind in " + path);
  }
  ds.target_dim = ds.kind == kRecordVelocity ? 2 : 4;
  ds.patch_cells = static_cast<int>(r.u32("patch_cells"));
  if (ds.patch_cells < 2 || ds.patch_cells > 4096) {
    throw FormatError("implausible TNTD patch_cells in " + path);
  }
  const std::uint32_t count = r.u32("count");
  const std::size_t cells = static_cast<std::size_t>(ds.patch_cells) * ds.patch_cells;
  ds.patches.resize(cells * count);
  ds.targets.resize(static_cast<std::size_t>(ds.target_dim) * count);
  for (std::uint32_t i = 0; i < count; ++i) {
    for (std::size_t c = 0; c < cells; ++c) ds.patches[i * cells + c] = r.f32("patch");
    for (int c = 0; c < ds.target_dim; ++c) {
      ds.targets[i * static_cast<std::size_t>(ds.target_dim) + c] = r.f32("target");
    }
  }
  return ds;
}

}  // namespace tnav
