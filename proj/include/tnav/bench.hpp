#pragma once

#include "tnav/scenario.hpp"

namespace tnav {

// Scenario-set benchmark over planner variants, mirroring the structure of a
// physical trial table: success rate, traversal time on successes, attitude
// and command smoothness.
struct BenchConfig {
  int scenario_count = 20;
  TerrainGenSpec terrain;           // defaults set in make_scenarios
  int map_height = 160;
  int map_width = 128;
  double resolution = 0.025;
  double time_limit = 30.0;
  double success_radius = 0.15;
  double start_margin = 0.6;        // meters from the map edge
  std::vector<PlannerVariant> variants = {PlannerVariant::TntMppi, PlannerVariant::TalMppi,
                                          PlannerVariant::WmvctMppi};
};

// Deterministic scenario list: boulder fields seeded from the master seed,
// start at the low-x end, goal at the high-x end, lateral jitter on both.
std::vector<Scenario> make_scenarios(const BenchConfig& cfg, std::uint64_t master_seed);

struct BenchResult {
  std::vector<Scenario> scenarios;
  // metrics[variant index][scenario index]
  std::vector<std::vector<RunMetrics>> metrics;
  std::vector<std::pair<std::string, Summary>> summaries;
};

// Runs every (variant, scenario) pair; scenarios fan out in parallel with one
// rng lineage per scenario, merged by scenario index.
BenchResult run_bench(const BenchConfig& cfg, const RunArtifacts& artifacts,
                      const RunConfig& run_cfg, std::uint64_t master_seed);

// Mean traversal time over the scenarios where both variants succeeded;
// NaN when there is no mutual success.
double mutual_success_time(const std::vector<RunMetrics>& a, const std::vector<RunMetrics>& b,
                           bool of_first);

}  // namespace tnav
