// tnav: traversability estimation and planning pipeline for vertically
// challenging terrain. Subcommands cover terrain generation, data
// collection, model training, map inference, planning, and benchmarks.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "app_config.hpp"
#include "tnav/astar.hpp"
#include "tnav/bench.hpp"
#include "tnav/emap_io.hpp"
#include "tnav/error.hpp"
#include "tnav/render.hpp"

namespace fs = std::filesystem;
using namespace tnav;
using app::AppConfig;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
};

fs::path ensure_out(const GlobalArgs& g) {
  fs::path dir(g.out_dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> sorted_files(const std::string& dir, const std::string& ext) {
  std::vector<std::string> files;
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no " + ext + " files in " + dir);
  return files;
}

std::vector<ElevationMap> load_maps(const std::string& dir) {
  std::vector<ElevationMap> maps;
  for (const auto& f : sorted_files(dir, ".emap")) maps.push_back(read_emap(f));
  return maps;
}

std::string index_name(const char* stem, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%04zu%s", stem, i, ext);
  return buf;
}

CombineWeights load_weights(const std::string& weights_path, const AppConfig& app) {
  if (weights_path.empty()) return app.weights;
  const Config cfg = Config::from_file(weights_path);
  const std::vector<double> flat = cfg.get_doubles("weights.effective", {});
  if (flat.size() != kNumChannels) {
    throw SpecError("weights file must carry weights.effective with 14 values");
  }
  std::array<double, kNumChannels> arr;
  std::copy(flat.begin(), flat.end(), arr.begin());
  return CombineWeights::from_flat(arr);
}

void save_weights(const CombineWeights& w, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "# effective channel weights used for label generation\n";
  out << "weights.effective=";
  const auto flat = w.flat();
  char buf[40];
  for (int c = 0; c < kNumChannels; ++c) {
    std::snprintf(buf, sizeof(buf), "%.17g%s", flat[c], c + 1 < kNumChannels ? "," : "\n");
    out << buf;
  }
}

int cmd_gen_terrain(const GlobalArgs& g, int count_override) {
  const AppConfig app = app::load_app_config(g.config_path);
  const fs::path out = ensure_out(g);
  const int count = count_override > 0 ? count_override : app.terrain_count;
  for (int i = 0; i < count; ++i) {
    const ElevationMap map =
        generate_terrain(app.terrain, derive_seed(g.seed, i, 0x6d61), app.map_height,
                         app.map_width, app.resolution);
    const std::string name = index_name("emap", i, ".emap");
    write_emap(map, (out / name).string());
    std::printf("wrote %s\n", (out / name).string().c_str());
  }
  write_emap_pgm(read_emap((out / index_name("emap", 0, ".emap")).string()),
                 (out / "emap_0000_preview.pgm").string());
  return 0;
}

int cmd_collect(const GlobalArgs& g, const std::string& maps_dir) {
  const AppConfig app = app::load_app_config(g.config_path);
  const fs::path out = ensure_out(g);
  const std::vector<ElevationMap> maps = load_maps(maps_dir);
  const CollectResult result =
      collect_dataset(maps, app.collect, app.policy, app.geom, app.sim, app.patch, g.seed);
  write_dataset(result.velocity, (out / "dataset_dv.tntd").string());
  write_dataset(result.pose, (out / "dataset_dq.tntd").string());
  std::printf("velocity samples: %zu (dropped %zu)\n", result.stats.velocity_samples,
              result.stats.velocity_dropped);
  std::printf("pose samples: %zu (dropped %zu)\n", result.stats.pose_samples,
              result.stats.pose_dropped);
  return 0;
}

int cmd_train(const GlobalArgs& g, const std::string& data_path, bool pose) {
  const AppConfig app = app::load_app_config(g.config_path);
  const fs::path out = ensure_out(g);
  const Dataset ds = read_dataset(data_path);
  const std::uint8_t want = pose ? kRecordPose : kRecordVelocity;
  if (ds.kind != want) {
    throw SpecError(std::string("dataset record kind does not match the ") +
                    (pose ? "pose" : "velocity") + " trainer");
  }
  RegressorSpec spec = pose ? app.pose_reg : app.vel_reg;
  spec.patch_cells = ds.patch_cells;
  Regressor reg = Regressor::init(spec, derive_seed(g.seed, pose ? 2 : 1, 0x696e));
  TrainConfig cfg = app.train;
  cfg.seed = derive_seed(g.seed, pose ? 4 : 3, 0x7472);
  const TrainHistory history = train_regressor(reg, ds, cfg);
  const char* stem = pose ? "pose_model" : "vel_model";
  write_regressor(reg, (out / (std::string(stem) + ".tntm")).string());
  write_history_csv(history, (out / (std::string(stem) + "_loss.csv")).string());
  std::printf("%s: final train nll %.4f, val nll %.4f (best epoch %d)\n", stem,
              history.train_nll.back(), history.val_nll.back(), history.best_epoch);
  return 0;
}

int cmd_build_labels(const GlobalArgs& g, const std::string& maps_dir, const std::string& vel_path,
                     const std::string& pose_path) {
  const AppConfig app = app::load_app_config(g.config_path);
  const fs::path out = ensure_out(g);
  const std::vector<ElevationMap> maps = load_maps(maps_dir);
  const Regressor vel = read_regressor(vel_path);
  const Regressor pose = read_regressor(pose_path);

  // First pass with the configured base weights to measure channel spread,
  // then the effective (sigma-normalized) weights label every map.
  CombineWeights weights = app.weights;
  if (app.normalize_weights) {
    std::vector<TraversabilityMap> probe;
    const std::size_t probe_count = std::min<std::size_t>(maps.size(), 4);
    for (std::size_t i = 0; i < probe_count; ++i) {
      probe.push_back(build_label_map(maps[i], app.patch, app.geom, vel, pose, weights,
                                      app.labels));
    }
    weights = normalize_weights(weights, channel_sigma(probe));
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const TraversabilityMap tm =
        build_label_map(maps[i], app.patch, app.geom, vel, pose, weights, app.labels);
    const std::string name = index_name("label", i, ".tmap");
    write_tmap(tm, (out / name).string());
    std::printf("wrote %s\n", (out / name).string().c_str());
  }
  save_weights(weights, out / "weights.cfg");
  return 0;
}

int cmd_train_encoder(const GlobalArgs& g, const std::string& maps_dir,
                      const std::string& labels_dir) {
  const AppConfig app = app::load_app_config(g.config_path);
  const fs::path out = ensure_out(g);
  const std::vector<ElevationMap> maps = load_maps(maps_dir);
  std::vector<TraversabilityMap> labels;
  for (const auto& f : sorted_files(labels_dir, ".tmap")) labels.push_back(read_tmap(f));
  if (labels.size() != maps.size()) {
    throw SpecError("label count does not match map count");
  }
  std::vector<EncoderPair> pairs;
  for (std::size_t i = 0; i < maps.size(); ++i) pairs.push_back({&maps[i], &labels[i]});

  MapEncoder enc = MapEncoder::init(app.encoder, derive_seed(g.seed, 5, 0x656e));
  EncoderTrainConfig cfg = app.encoder_train;
  cfg.base.seed = derive_seed(g.seed, 6, 0x6574);
  const TrainHistory history = train_encoder(enc, pairs, cfg);
  write_encoder(enc, (out / "encoder.tnte").string());
  write_history_csv(history, (out / "encoder_loss.csv").string());
  std::printf("encoder: final train mae %.5f, val mae %.5f (best epoch %d)\n",
              history.train_nll.back(), history.val_nll.back(), history.best_epoch);
  return 0;
}

int cmd_infer_map(const GlobalArgs& g, const std::string& encoder_path,
                  const std::string& map_path, const std::string& weights_path) {
  const AppConfig app = app::load_app_config(g.config_path);
  const fs::path out = ensure_out(g);
  const MapEncoder enc = read_encoder(encoder_path);
  const ElevationMap map = read_emap(map_path);
  const CombineWeights weights = load_weights(weights_path, app);
  const TraversabilityMap tm = infer_map(enc, map, weights);
  write_tmap(tm, (out / "inferred.tmap").string());
  write_tmap_ppm(tm, (out / "inferred.ppm").string());
  write_tmap_pgm(tm, (out / "inferred.pgm").string());
  std::printf("wrote %s\n", (out / "inferred.tmap").string().c_str());
  return 0;
}

int cmd_plan_astar(const GlobalArgs& g, const std::string& tmap_path, double start_x,
                   double start_y, double goal_x, double goal_y) {
  const AppConfig app = app::load_app_config(g.config_path);
  const fs::path out = ensure_out(g);
  const TraversabilityMap tm = read_tmap(tmap_path);
  const CostGrid grid = downsample(tm, app.run.coarse_height, app.run.coarse_width);
  const GridPath path =
      astar_plan(grid, {grid.cell_m(start_x), grid.cell_n(start_y)},
                 {grid.cell_m(goal_x), grid.cell_n(goal_y)}, app.run.astar_beta);

  std::ofstream csv(out / "astar_path.csv");
  csv << "cell_m,cell_n,x,y\n";
  for (std::size_t i = 0; i < path.cells.size(); ++i) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g\n", path.cells[i].first,
                  path.cells[i].second, path.waypoints[i][0], path.waypoints[i][1]);
    csv << buf;
  }
  RenderOverlay overlay;
  overlay.path = &path;
  write_tmap_ppm(tm, (out / "astar_path.ppm").string(), overlay);
  std::printf("path cells: %zu, cost %.6f\n", path.cells.size(), path.total_cost);
  return 0;
}

int cmd_plan_mppi(const GlobalArgs& g, const std::string& encoder_path,
                  const std::string& weights_path, const std::string& variant_name) {
  const AppConfig app = app::load_app_config(g.config_path);
  const fs::path out = ensure_out(g);
  const PlannerVariant variant = variant_from_string(variant_name);

  MapEncoder enc;
  RunArtifacts artifacts;
  artifacts.weights = load_weights(weights_path, app);
  if (variant == PlannerVariant::TntMppi || variant == PlannerVariant::AStar) {
    if (encoder_path.empty()) throw SpecError("variant '" + variant_name + "' needs --encoder");
    enc = read_encoder(encoder_path);
    artifacts.encoder = &enc;
  }

  const std::vector<Scenario> scenarios = make_scenarios(app.bench, g.seed);
  const RunResult rr = run_scenario(scenarios.front(), variant, artifacts, app.run,
                                    derive_seed(g.seed, 0, 0x706c));
  write_trajectory_csv(rr.trajectory, (out / "mppi_traj.csv").string());
  RenderOverlay overlay;
  overlay.trajectory = &rr.trajectory;
  if (rr.final_tm.has_value()) {
    write_tmap_ppm(*rr.final_tm, (out / "mppi_traj.ppm").string(), overlay);
  } else {
    const ElevationMap map =
        generate_terrain(scenarios.front().terrain, scenarios.front().terrain_seed,
                         scenarios.front().map_height, scenarios.front().map_width,
                         scenarios.front().resolution);
    write_emap_ppm(map, (out / "mppi_traj.ppm").string(), overlay);
  }
  std::printf("%s run: success=%d time=%.1fs failure=%s\n", variant_name.c_str(),
              rr.metrics.success ? 1 : 0, rr.metrics.traversal_time,
              to_string(rr.metrics.failure).c_str());
  return 0;
}

int cmd_bench(const GlobalArgs& g, const std::string& encoder_path,
              const std::string& weights_path) {
  const AppConfig app = app::load_app_config(g.config_path);
  const fs::path out = ensure_out(g);
  const MapEncoder enc = read_encoder(encoder_path);
  RunArtifacts artifacts;
  artifacts.encoder = &enc;
  artifacts.weights = load_weights(weights_path, app);

  const BenchResult result = run_bench(app.bench, artifacts, app.run, g.seed);

  const std::string table = summary_table(result.summaries);
  std::fputs(table.c_str(), stdout);
  {
    std::ofstream txt(out / "bench_summary.txt");
    txt << table;
  }
  {
    std::ofstream csv(out / "bench_summary.csv");
    csv << summary_csv(result.summaries);
  }
  fs::create_directories(out / "runs");
  for (std::size_t v = 0; v < result.metrics.size(); ++v) {
    std::ofstream csv(out / "runs" / (result.summaries[v].first + "_runs.csv"));
    csv << "scenario,success,traversal_time,failure,mean_abs_roll_deg,mean_abs_pitch_deg,"
           "mean_droll_deg,mean_dpitch_deg,mean_dv_cmd,mean_domega_cmd\n";
    for (std::size_t i = 0; i < result.metrics[v].size(); ++i) {
      const RunMetrics& m = result.metrics[v][i];
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%zu,%d,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i,
                    m.success ? 1 : 0, m.traversal_time, to_string(m.failure).c_str(),
                    m.mean_abs_roll_deg, m.mean_abs_pitch_deg, m.mean_droll_deg,
                    m.mean_dpitch_deg, m.mean_dv_cmd, m.mean_domega_cmd);
      csv << buf;
    }
  }
  return 0;
}

int cmd_render(const GlobalArgs& g, const std::string& map_path, const std::string& tmap_path,
               const std::string& traj_path) {
  const fs::path out = ensure_out(g);
  std::vector<TrajectoryPoint> traj;
  if (!traj_path.empty()) {
    std::ifstream in(traj_path);
    if (!in) throw IoError("cannot open trajectory CSV: " + traj_path);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      TrajectoryPoint p{};
      if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &p.step,
                      &p.state.x, &p.state.y, &p.state.z, &p.state.roll, &p.state.pitch,
                      &p.state.yaw, &p.state.v, &p.state.omega, &p.cost) == 10) {
        traj.push_back(p);
      }
    }
  }
  RenderOverlay overlay;
  if (!traj.empty()) overlay.trajectory = &traj;
  if (!tmap_path.empty()) {
    write_tmap_ppm(read_tmap(tmap_path), (out / "render.ppm").string(), overlay);
  } else if (!map_path.empty()) {
    write_emap_ppm(read_emap(map_path), (out / "render.ppm").string(), overlay);
  } else {
    throw SpecError("render needs --map or --tmap");
  }
  std::printf("wrote %s\n", (out / "render.ppm").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"traversability estimation and planning for vertically challenging terrain"};
  cli.require_subcommand(1);

  GlobalArgs g;
  cli.add_option("--config", g.config_path, "key=value config file");
  cli.add_option("--seed", g.seed, "master seed");
  cli.add_option("--out", g.out_dir, "output directory");

  int gen_count = 0;
  auto* gen = cli.add_subcommand("gen-terrain", "generate procedural elevation maps");
  gen->add_option("--count", gen_count, "number of maps (default from config)");

  std::string maps_dir = "out";
  auto* collect = cli.add_subcommand("collect", "drive the simulator and record datasets");
  collect->add_option("--maps", maps_dir, "directory of .emap files");

  std::string data_path;
  auto* train_vel = cli.add_subcommand("train-vel", "train the velocity-uncertainty regressor");
  train_vel->add_option("--data", data_path, "TNTD dataset (velocity records)")->required();
  auto* train_pose = cli.add_subcommand("train-pose", "train the pose-uncertainty regressor");
  train_pose->add_option("--data", data_path, "TNTD dataset (pose records)")->required();

  std::string vel_path, pose_path, labels_dir, encoder_path, weights_path, tmap_path, map_path,
      traj_path;
  auto* labels = cli.add_subcommand("build-labels", "generate traversability label maps");
  labels->add_option("--maps", maps_dir, "directory of .emap files");
  labels->add_option("--vel", vel_path, "velocity regressor .tntm")->required();
  labels->add_option("--pose", pose_path, "pose regressor .tntm")->required();

  auto* tenc = cli.add_subcommand("train-encoder", "train the map-wise encoder");
  tenc->add_option("--maps", maps_dir, "directory of .emap files");
  tenc->add_option("--labels", labels_dir, "directory of .tmap label files")->required();

  auto* infer = cli.add_subcommand("infer-map", "reconstruct a traversability map");
  infer->add_option("--encoder", encoder_path, "encoder .tnte")->required();
  infer->add_option("--map", map_path, "elevation map .emap")->required();
  infer->add_option("--weights", weights_path, "weights.cfg from build-labels");

  double start_x = 0.5, start_y = 0.5, goal_x = 3.5, goal_y = 2.5;
  auto* pastar = cli.add_subcommand("plan-astar", "plan on the downsampled cost grid");
  pastar->add_option("--tmap", tmap_path, "traversability map .tmap")->required();
  pastar->add_option("--start-x", start_x, "start x, meters");
  pastar->add_option("--start-y", start_y, "start y, meters");
  pastar->add_option("--goal-x", goal_x, "goal x, meters");
  pastar->add_option("--goal-y", goal_y, "goal y, meters");

  std::string variant_name = "tnt";
  auto* pmppi = cli.add_subcommand("plan-mppi", "closed-loop planning run on one scenario");
  pmppi->add_option("--encoder", encoder_path, "encoder .tnte (guided variants)");
  pmppi->add_option("--weights", weights_path, "weights.cfg from build-labels");
  pmppi->add_option("--variant", variant_name, "tnt | tal | wmvct | astar");

  auto* bench = cli.add_subcommand("bench", "scenario benchmark over planner variants");
  bench->add_option("--encoder", encoder_path, "encoder .tnte")->required();
  bench->add_option("--weights", weights_path, "weights.cfg from build-labels");

  auto* render = cli.add_subcommand("render", "heatmap rendering with optional overlays");
  render->add_option("--map", map_path, "elevation map .emap");
  render->add_option("--tmap", tmap_path, "traversability map .tmap");
  render->add_option("--traj", traj_path, "trajectory CSV overlay");

  CLI11_PARSE(cli, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_terrain(g, gen_count);
    if (collect->parsed()) return cmd_collect(g, maps_dir);
    if (train_vel->parsed()) return cmd_train(g, data_path, false);
    if (train_pose->parsed()) return cmd_train(g, data_path, true);
    if (labels->parsed()) return cmd_build_labels(g, maps_dir, vel_path, pose_path);
    if (tenc->parsed()) return cmd_train_encoder(g, maps_dir, labels_dir);
    if (infer->parsed()) return cmd_infer_map(g, encoder_path, map_path, weights_path);
    if (pastar->parsed()) return cmd_plan_astar(g, tmap_path, start_x, start_y, goal_x, goal_y);
    if (pmppi->parsed()) return cmd_plan_mppi(g, encoder_path, weights_path, variant_name);
    if (bench->parsed()) return cmd_bench(g, encoder_path, weights_path);
    if (render->parsed()) return cmd_render(g, map_path, tmap_path, traj_path);
  } catch (const SpecError& e) {
    std::fprintf(stderr, "specification error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
