#include "tnav/bench.hpp"

#include <cmath>
#include <limits>

#include "tnav/error.hpp"
#include "tnav/parallel.hpp"
#include "tnav/simulator.hpp"

namespace tnav {

namespace {

// A pose is a usable trial endpoint when the vehicle can actually rest
// there: mild attitude and a calm footprint.
bool benign_spot(const ElevationMap& map, const VehicleGeometry& geom, double x, double y) {
  const SettleResult s = settle_pose_clamped(map, x, y, 0.0, geom);
  if (std::abs(s.roll) > deg_to_rad(8.0) || std::abs(s.pitch) > deg_to_rad(8.0)) return false;
  return footprint_height_variance(map, x, y, 0.0, geom) < 1.5e-3;
}

// First benign y near the lateral band center, scanning outward on a fixed
// lattice; falls back to the band center.
double pick_benign_y(const ElevationMap& map, const VehicleGeometry& geom, double x,
                     double y_center, double half_band) {
  for (double off = 0.0; off <= half_band; off += 0.05) {
    for (const double sign : {1.0, -1.0}) {
      const double y = y_center + sign * off;
      if (benign_spot(map, geom, x, y)) return y;
      if (off == 0.0) break;
    }
  }
  return y_center;
}

}  // namespace

std::vector<Scenario> make_scenarios(const BenchConfig& cfg, std::uint64_t master_seed) {
  if (cfg.scenario_count < 1) throw SpecError("bench scenario count must be >= 1");
  const VehicleGeometry geom = VehicleGeometry::box(0.31, 0.20, 0.08);
  std::vector<Scenario> scenarios;
  scenarios.reserve(cfg.scenario_count);
  const double ext_x = cfg.map_height * cfg.resolution;
  const double ext_y = cfg.map_width * cfg.resolution;
  for (int i = 0; i < cfg.scenario_count; ++i) {
    Rng rng(derive_seed(master_seed, static_cast<std::uint64_t>(i), 0xbe));
    Scenario sc;
    sc.terrain = cfg.terrain;
    sc.terrain.kind = TerrainKind::BoulderField;
    sc.terrain_seed = derive_seed(master_seed, static_cast<std::uint64_t>(i), 0x7465);
    sc.map_height = cfg.map_height;
    sc.map_width = cfg.map_width;
    sc.resolution = cfg.resolution;
    sc.time_limit = cfg.time_limit;
    sc.success_radius = cfg.success_radius;

    const ElevationMap map = generate_terrain(sc.terrain, sc.terrain_seed, sc.map_height,
                                              sc.map_width, sc.resolution);
    const double half_band = 0.25 * ext_y;
    sc.start.x = cfg.start_margin;
    sc.start.y = pick_benign_y(map, geom, sc.start.x,
                               draw_uniform(rng, 0.4 * ext_y, 0.6 * ext_y), half_band);
    sc.start.yaw = 0.0;
    sc.start.v = 0.0;
    sc.goal_x = ext_x - cfg.start_margin;
    sc.goal_y = pick_benign_y(map, geom, sc.goal_x,
                              draw_uniform(rng, 0.4 * ext_y, 0.6 * ext_y), half_band);
    scenarios.push_back(sc);
  }
  return scenarios;
}

BenchResult run_bench(const BenchConfig& cfg, const RunArtifacts& artifacts,
                      const RunConfig& run_cfg, std::uint64_t master_seed) {
  BenchResult result;
  result.scenarios = make_scenarios(cfg, master_seed);
  result.metrics.assign(cfg.variants.size(), {});

  for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
    result.metrics[v].assign(result.scenarios.size(), RunMetrics{});
    const PlannerVariant variant = cfg.variants[v];
    parallel_for(result.scenarios.size(), [&, v, variant](std::size_t i) {
      const std::uint64_t run_seed = derive_seed(master_seed, i, 0x72756e + v);
      const RunResult rr =
          run_scenario(result.scenarios[i], variant, artifacts, run_cfg, run_seed);
      result.metrics[v][i] = rr.metrics;
    });
    result.summaries.emplace_back(to_string(variant), aggregate(result.metrics[v]));
  }
  return result;
}

double mutual_success_time(const std::vector<RunMetrics>& a, const std::vector<RunMetrics>& b,
                           bool of_first) {
  if (a.size() != b.size()) throw SpecError("mutual_success_time: run count mismatch");
  double sum = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].success && b[i].success) {
      sum += of_first ? a[i].traversal_time : b[i].traversal_time;
      ++n;
    }
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / n;
}

}  // namespace tnav
