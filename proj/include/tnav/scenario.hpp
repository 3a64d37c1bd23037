#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tnav/astar.hpp"
#include "tnav/encoder.hpp"
#include "tnav/mppi.hpp"
#include "tnav/terrain_gen.hpp"
#include "tnav/tracker.hpp"

namespace tnav {

enum class PlannerVariant { TntMppi, TalMppi, WmvctMppi, AStar };

PlannerVariant variant_from_string(const std::string& s);
std::string to_string(PlannerVariant v);

struct Scenario {
  TerrainGenSpec terrain;
  std::uint64_t terrain_seed = 0;
  int map_height = 160;
  int map_width = 128;
  double resolution = 0.025;
  VehicleState start;
  double goal_x = 0.0;
  double goal_y = 0.0;
  double time_limit = 30.0;     // seconds
  double success_radius = 0.15;  // meters
};

enum class FailureKind { None, Rollover, Stuck, Timeout };

std::string to_string(FailureKind f);

struct RunMetrics {
  bool success = false;
  double traversal_time = 0.0;        // seconds, capped at the time limit
  double mean_abs_roll_deg = 0.0;     // over all steps
  double mean_abs_pitch_deg = 0.0;
  double mean_droll_deg = 0.0;        // per-step |roll(t) - roll(t-1)|
  double mean_dpitch_deg = 0.0;
  double mean_dv_cmd = 0.0;           // per-step |v_cmd(t) - v_cmd(t-1)|
  double mean_domega_cmd = 0.0;
  FailureKind failure = FailureKind::None;
};

struct TrajectoryPoint {
  int step;
  VehicleState state;
  Command cmd;
  double cost;  // planner cost of the executed plan (0 when unavailable)
};

struct RunResult {
  RunMetrics metrics;
  std::vector<TrajectoryPoint> trajectory;
  std::optional<TraversabilityMap> final_tm;  // last inferred map (guided runs)
};

// Trained artifacts a scenario run plans with.
struct RunArtifacts {
  const MapEncoder* encoder = nullptr;  // required for TNT / A* variants
  CombineWeights weights;
};

// Closed-loop knobs shared by the bench and CLI.
struct RunConfig {
  VehicleGeometry geom = VehicleGeometry::box(0.31, 0.20, 0.08);
  SimParams sim;
  MppiConfig tnt;       // short-horizon, guided
  MppiConfig tal;       // long-horizon, low sample count, unguided
  MppiConfig wmvct;     // short-horizon, per-step attitude costing, unguided
  TrackerGains tracker;
  double astar_beta = 2.0;
  int coarse_height = 31;
  int coarse_width = 25;
  double tracker_lookahead = 0.3;
  int tm_update_every = 10;       // control steps between infer_map refreshes
  double mask_tau_percentile = 0.9;  // tau from the current map's combined values
  double stuck_window = 3.0;      // seconds
  double stuck_displacement = 0.05;  // meters

  static RunConfig defaults();
};

// Runs one closed-loop scenario: infer the traversability map at a low rate,
// plan, execute the first command through the stochastic simulator, repeat
// until success, rollover, stuck, or timeout. Deterministic in (inputs, seed).
RunResult run_scenario(const Scenario& sc, PlannerVariant variant, const RunArtifacts& artifacts,
                       const RunConfig& cfg, std::uint64_t seed);

struct Summary {
  int runs = 0;
  int successes = 0;
  double success_rate = 0.0;
  // Traversal-time stats cover successful runs only; attitude/command stats
  // cover all runs. Population standard deviations.
  double time_mean = 0.0, time_std = 0.0;
  bool time_defined = false;
  double roll_mean = 0.0, roll_std = 0.0;
  double pitch_mean = 0.0, pitch_std = 0.0;
  double droll_mean = 0.0, droll_std = 0.0;
  double dpitch_mean = 0.0, dpitch_std = 0.0;
  double dv_mean = 0.0, dv_std = 0.0;
  double domega_mean = 0.0, domega_std = 0.0;
};

Summary aggregate(const std::vector<RunMetrics>& runs);

// Aligned text table / CSV rows for a set of per-variant summaries.
std::string summary_table(const std::vector<std::pair<std::string, Summary>>& rows);
std::string summary_csv(const std::vector<std::pair<std::string, Summary>>& rows);

void write_trajectory_csv(const std::vector<TrajectoryPoint>& traj, const std::string& path);

}  // namespace tnav
