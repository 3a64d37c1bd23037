#include "tnav/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>

#include "tnav/error.hpp"
#include "tnav/simulator.hpp"

namespace tnav {

PlannerVariant variant_from_string(const std::string& s) {
  if (s == "tnt") return PlannerVariant::TntMppi;
  if (s == "tal") return PlannerVariant::TalMppi;
  if (s == "wmvct") return PlannerVariant::WmvctMppi;
  if (s == "astar") return PlannerVariant::AStar;
  throw SpecError("unknown planner variant: '" + s + "'");
}

std::string to_string(PlannerVariant v) {
  switch (v) {
    case PlannerVariant::TntMppi: return "tnt";
    case PlannerVariant::TalMppi: return "tal";
    case PlannerVariant::WmvctMppi: return "wmvct";
    case PlannerVariant::AStar: return "astar";
  }
  return "?";
}

std::string to_string(FailureKind f) {
  switch (f) {
    case FailureKind::None: return "none";
    case FailureKind::Rollover: return "rollover";
    case FailureKind::Stuck: return "stuck";
    case FailureKind::Timeout: return "timeout";
  }
  return "?";
}

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  // Guided short-horizon planner.
  cfg.tnt.horizon = 12;
  cfg.tnt.samples = 64;
  cfg.tnt.mask_mode = MaskMode::Hard;
  // Long-horizon unguided planner: the horizon cost caps the sample count.
  cfg.tal.horizon = 25;
  cfg.tal.samples = 24;
  cfg.tal.weights.trav = 0.0;
  // Decomposed-model planner: per-step attitude costing instead of a map.
  cfg.wmvct.horizon = 12;
  cfg.wmvct.samples = 64;
  cfg.wmvct.weights.trav = 0.0;
  cfg.wmvct.weights.stability = 2.0;
  return cfg;
}

namespace {

struct MetricAccumulator {
  double abs_roll = 0.0, abs_pitch = 0.0;
  double droll = 0.0, dpitch = 0.0;
  double dv = 0.0, domega = 0.0;
  int steps = 0;
  int diff_steps = 0;

  void add(const VehicleState& prev, const VehicleState& cur, const Command& prev_cmd,
           const Command& cmd, bool first) {
    abs_roll += std::abs(cur.roll);
    abs_pitch += std::abs(cur.pitch);
    ++steps;
    if (!first) {
      droll += std::abs(cur.roll - prev.roll);
      dpitch += std::abs(cur.pitch - prev.pitch);
      dv += std::abs(cmd.v - prev_cmd.v);
      domega += std::abs(cmd.omega - prev_cmd.omega);
      ++diff_steps;
    }
  }

  void fill(RunMetrics& m) const {
    if (steps > 0) {
      m.mean_abs_roll_deg = rad_to_deg(abs_roll / steps);
      m.mean_abs_pitch_deg = rad_to_deg(abs_pitch / steps);
    }
    if (diff_steps > 0) {
      m.mean_droll_deg = rad_to_deg(droll / diff_steps);
      m.mean_dpitch_deg = rad_to_deg(dpitch / diff_steps);
      m.mean_dv_cmd = dv / diff_steps;
      m.mean_domega_cmd = domega / diff_steps;
    }
  }
};

}  // namespace

RunResult run_scenario(const Scenario& sc, PlannerVariant variant, const RunArtifacts& artifacts,
                       const RunConfig& cfg, std::uint64_t seed) {
  if (!(sc.time_limit > 0.0)) throw SpecError("scenario time limit must be > 0");
  const bool needs_tm = variant == PlannerVariant::TntMppi || variant == PlannerVariant::AStar;
  if (needs_tm && artifacts.encoder == nullptr) {
    throw SpecError("run_scenario: variant '" + to_string(variant) +
                    "' requires a trained encoder artifact");
  }

  const ElevationMap map = generate_terrain(sc.terrain, sc.terrain_seed, sc.map_height,
                                            sc.map_width, sc.resolution);
  if (!map.in_extent(sc.start.x, sc.start.y) || !map.in_extent(sc.goal_x, sc.goal_y)) {
    throw SpecError("run_scenario: start or goal outside the map");
  }

  MppiConfig mppi_cfg = cfg.tnt;
  switch (variant) {
    case PlannerVariant::TntMppi: mppi_cfg = cfg.tnt; break;
    case PlannerVariant::TalMppi: mppi_cfg = cfg.tal; break;
    case PlannerVariant::WmvctMppi: mppi_cfg = cfg.wmvct; break;
    case PlannerVariant::AStar: break;
  }

  Rng rng(derive_seed(seed, 0x7363656e));

  RunResult result;
  VehicleState state = sc.start;
  {
    const SettleResult s = settle_pose_clamped(map, state.x, state.y, state.yaw, cfg.geom);
    state.z = s.z;
    state.roll = s.roll;
    state.pitch = s.pitch;
  }

  std::optional<TraversabilityMap> tm;
  std::optional<GridPath> grid_path;
  ControlSequence nominal = ControlSequence::zeros(mppi_cfg.horizon);

  const int max_steps = static_cast<int>(std::ceil(sc.time_limit / cfg.sim.dt));
  const int stuck_steps = std::max(1, static_cast<int>(cfg.stuck_window / cfg.sim.dt));
  std::deque<std::pair<double, double>> recent_xy;

  MetricAccumulator acc;
  RunMetrics& metrics = result.metrics;
  metrics.failure = FailureKind::Timeout;
  metrics.traversal_time = sc.time_limit;

  VehicleState prev_state = state;
  Command prev_cmd{};
  bool first = true;

  const double base_trav_weight = mppi_cfg.weights.trav;
  for (int step = 0; step < max_steps; ++step) {
    // Low-rate traversability refresh, emulating the online mapping loop.
    if (needs_tm && step % cfg.tm_update_every == 0) {
      tm = infer_map(*artifacts.encoder, map, artifacts.weights);
      mppi_cfg.mask_tau = tm->combined_percentile(cfg.mask_tau_percentile);
      // Per-step traversability lookups are normalized by the mask threshold
      // so the guidance term has a map-independent scale.
      mppi_cfg.weights.trav = base_trav_weight / std::max(mppi_cfg.mask_tau, 1e-9);
      if (variant == PlannerVariant::AStar) {
        const CostGrid grid = downsample(*tm, cfg.coarse_height, cfg.coarse_width);
        try {
          grid_path = astar_plan(grid, {grid.cell_m(state.x), grid.cell_n(state.y)},
                                 {grid.cell_m(sc.goal_x), grid.cell_n(sc.goal_y)}, cfg.astar_beta);
        } catch (const NoPathError&) {
          // Keep the previous path, if any; the stuck/timeout checks decide.
        }
      }
    }

    Command cmd{};
    double plan_cost = 0.0;
    if (variant == PlannerVariant::AStar) {
      if (grid_path.has_value()) {
        cmd = track_path(*grid_path, state, cfg.tracker_lookahead, cfg.tracker);
        plan_cost = grid_path->total_cost;
      }
    } else {
      const TraversabilityMap* tm_ptr =
          variant == PlannerVariant::TntMppi && tm.has_value() ? &tm.value() : nullptr;
      MppiResult plan = mppi_plan(state, sc.goal_x, sc.goal_y, tm_ptr, nominal, mppi_cfg, map,
                                  cfg.geom, cfg.sim, rng);
      if (plan.diag.saturated && mppi_cfg.mask_mode == MaskMode::Hard) {
        // Every sample was masked; replan once in soft mode.
        MppiConfig soft_cfg = mppi_cfg;
        soft_cfg.mask_mode = MaskMode::Soft;
        plan = mppi_plan(state, sc.goal_x, sc.goal_y, tm_ptr, nominal, soft_cfg, map, cfg.geom,
                         cfg.sim, rng);
      }
      cmd = plan.diag.planned.u.front();
      nominal = std::move(plan.next_nominal);
      double best = plan.diag.costs.front();
      for (const double c : plan.diag.costs) best = std::min(best, c);
      plan_cost = best;
    }

    const VehicleState next = simulate_step(state, cmd, map, cfg.geom, cfg.sim, rng);
    result.trajectory.push_back({step, next, cmd, plan_cost});
    acc.add(prev_state, next, prev_cmd, cmd, first);
    prev_state = next;
    prev_cmd = cmd;
    first = false;
    state = next;

    const double t_now = (step + 1) * cfg.sim.dt;

    if (hypot2(state.x - sc.goal_x, state.y - sc.goal_y) <= sc.success_radius) {
      metrics.success = true;
      metrics.failure = FailureKind::None;
      metrics.traversal_time = t_now;
      break;
    }
    if (std::abs(state.roll) > cfg.sim.rollover_threshold ||
        std::abs(state.pitch) > cfg.sim.rollover_threshold) {
      metrics.failure = FailureKind::Rollover;
      metrics.traversal_time = t_now;
      break;
    }
    recent_xy.emplace_back(state.x, state.y);
    if (static_cast<int>(recent_xy.size()) > stuck_steps) {
      recent_xy.pop_front();
      const double moved = hypot2(state.x - recent_xy.front().first,
                                  state.y - recent_xy.front().second);
      if (moved < cfg.stuck_displacement) {
        metrics.failure = FailureKind::Stuck;
        metrics.traversal_time = t_now;
        break;
      }
    }
  }

  acc.fill(metrics);
  if (tm.has_value()) result.final_tm = std::move(tm);
  return result;
}

namespace {

struct Stat {
  double sum = 0.0, sq = 0.0;
  int n = 0;
  void add(double x) {
    sum += x;
    sq += x * x;
    ++n;
  }
  double mean() const { return n == 0 ? 0.0 : sum / n; }
  double stddev() const {
    if (n == 0) return 0.0;
    const double m = mean();
    const double var = sq / n - m * m;
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

}  // namespace

Summary aggregate(const std::vector<RunMetrics>& runs) {
  if (runs.empty()) throw SpecError("aggregate: no runs");
  Summary s;
  s.runs = static_cast<int>(runs.size());
  Stat time, roll, pitch, droll, dpitch, dv, domega;
  for (const RunMetrics& m : runs) {
    if (m.success) {
      ++s.successes;
      time.add(m.traversal_time);
    }
    roll.add(m.mean_abs_roll_deg);
    pitch.add(m.mean_abs_pitch_deg);
    droll.add(m.mean_droll_deg);
    dpitch.add(m.mean_dpitch_deg);
    dv.add(m.mean_dv_cmd);
    domega.add(m.mean_domega_cmd);
  }
  s.success_rate = static_cast<double>(s.successes) / s.runs;
  s.time_defined = time.n > 0;
  s.time_mean = time.mean();
  s.time_std = time.stddev();
  s.roll_mean = roll.mean();
  s.roll_std = roll.stddev();
  s.pitch_mean = pitch.mean();
  s.pitch_std = pitch.stddev();
  s.droll_mean = droll.mean();
  s.droll_std = droll.stddev();
  s.dpitch_mean = dpitch.mean();
  s.dpitch_std = dpitch.stddev();
  s.dv_mean = dv.mean();
  s.dv_std = dv.stddev();
  s.domega_mean = domega.mean();
  s.domega_std = domega.stddev();
  return s;
}

std::string summary_table(const std::vector<std::pair<std::string, Summary>>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-8s %-9s %-14s %-12s %-12s %-12s %-12s %-12s %-12s\n",
                "variant", "success", "time[s]", "|roll|[deg]", "|pitch|[deg]", "droll[deg]",
                "dpitch[deg]", "dv[m/s]", "domega[r/s]");
  out << line;
  for (const auto& [name, s] : rows) {
    char time_buf[32];
    if (s.time_defined) {
      std::snprintf(time_buf, sizeof(time_buf), "%.1f+-%.1f", s.time_mean, s.time_std);
    } else {
      std::snprintf(time_buf, sizeof(time_buf), "-");
    }
    std::snprintf(line, sizeof(line),
                  "%-8s %2d/%-6d %-14s %5.2f+-%-5.2f %5.2f+-%-5.2f %5.2f+-%-5.2f %5.2f+-%-5.2f "
                  "%5.3f+-%-5.3f %5.3f+-%-5.3f\n",
                  name.c_str(), s.successes, s.runs, time_buf, s.roll_mean, s.roll_std,
                  s.pitch_mean, s.pitch_std, s.droll_mean, s.droll_std, s.dpitch_mean,
                  s.dpitch_std, s.dv_mean, s.dv_std, s.domega_mean, s.domega_std);
    out << line;
  }
  return out.str();
}

std::string summary_csv(const std::vector<std::pair<std::string, Summary>>& rows) {
  std::ostringstream out;
  out << "variant,runs,successes,success_rate,time_mean,time_std,roll_mean,roll_std,"
         "pitch_mean,pitch_std,droll_mean,droll_std,dpitch_mean,dpitch_std,"
         "dv_mean,dv_std,domega_mean,domega_std\n";
  char line[512];
  for (const auto& [name, s] : rows) {
    char time_mean[32], time_std[32];
    if (s.time_defined) {
      std::snprintf(time_mean, sizeof(time_mean), "%.17g", s.time_mean);
      std::snprintf(time_std, sizeof(time_std), "%.17g", s.time_std);
    } else {
      std::snprintf(time_mean, sizeof(time_mean), "na");
      std::snprintf(time_std, sizeof(time_std), "na");
    }
    std::snprintf(line, sizeof(line),
                  "%s,%d,%d,%.17g,%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%.17g,%.17g\n",
                  name.c_str(), s.runs, s.successes, s.success_rate, time_mean, time_std,
                  s.roll_mean, s.roll_std, s.pitch_mean, s.pitch_std, s.droll_mean, s.droll_std,
                  s.dpitch_mean, s.dpitch_std, s.dv_mean, s.dv_std, s.domega_mean, s.domega_std);
    out << line;
  }
  return out.str();
}

void write_trajectory_csv(const std::vector<TrajectoryPoint>& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "step,x,y,z,roll,pitch,yaw,v,omega,cost\n";
  char line[320];
  for (const TrajectoryPoint& p : traj) {
    std::snprintf(line, sizeof(line),
                  "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.step, p.state.x,
                  p.state.y, p.state.z, p.state.roll, p.state.pitch, p.state.yaw, p.state.v,
                  p.state.omega, p.cost);
    out << line;
  }
}

}  // namespace tnav
