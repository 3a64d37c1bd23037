#include "app_config.hpp"

#include "tnav/error.hpp"

namespace tnav::app {

namespace {

std::array<double, 2> to_array2(const std::vector<double>& v, const char* key) {
  if (v.size() != 2) throw SpecError(std::string("config key '") + key + "' needs 2 values");
  return {v[0], v[1]};
}

std::array<double, 4> to_array4(const std::vector<double>& v, const char* key) {
  if (v.size() != 4) throw SpecError(std::string("config key '") + key + "' needs 4 values");
  return {v[0], v[1], v[2], v[3]};
}

std::array<double, 8> to_array8(const std::vector<double>& v, const char* key) {
  if (v.size() != 8) throw SpecError(std::string("config key '") + key + "' needs 8 values");
  std::array<double, 8> out;
  for (int i = 0; i < 8; ++i) out[i] = v[i];
  return out;
}

MppiConfig read_mppi(const Config& cfg, const std::string& prefix, const MppiConfig& base) {
  MppiConfig m = base;
  m.horizon = cfg.get_int(prefix + ".horizon", m.horizon);
  m.samples = cfg.get_int(prefix + ".samples", m.samples);
  m.lambda = cfg.get_double(prefix + ".lambda", m.lambda);
  m.sigma_v = cfg.get_double(prefix + ".sigma_v", m.sigma_v);
  m.sigma_omega = cfg.get_double(prefix + ".sigma_omega", m.sigma_omega);
  m.weights.goal = cfg.get_double(prefix + ".w_goal", m.weights.goal);
  m.weights.trav = cfg.get_double(prefix + ".w_trav", m.weights.trav);
  m.weights.effort = cfg.get_double(prefix + ".w_effort", m.weights.effort);
  m.weights.rollover = cfg.get_double(prefix + ".w_rollover", m.weights.rollover);
  m.weights.stability = cfg.get_double(prefix + ".w_stability", m.weights.stability);
  m.soft_penalty = cfg.get_double(prefix + ".soft_penalty", m.soft_penalty);
  const std::string mode = cfg.get_string(prefix + ".mask_mode", "");
  if (!mode.empty()) {
    if (mode == "hard") {
      m.mask_mode = MaskMode::Hard;
    } else if (mode == "soft") {
      m.mask_mode = MaskMode::Soft;
    } else {
      throw SpecError("config key '" + prefix + ".mask_mode': expected hard or soft");
    }
  }
  return m;
}

}  // namespace

AppConfig AppConfig::from_config(const Config& cfg) {
  AppConfig app;

  app.map_height = cfg.get_int("map.height_cells", app.map_height);
  app.map_width = cfg.get_int("map.width_cells", app.map_width);
  app.resolution = cfg.get_double("map.resolution", app.resolution);

  app.terrain.kind = terrain_kind_from_string(cfg.get_string("terrain.kind", "boulder_field"));
  app.terrain.boulder_count = cfg.get_int("terrain.boulder_count", 70);
  app.terrain.radius_lo = cfg.get_double("terrain.radius_lo", 0.08);
  app.terrain.radius_hi = cfg.get_double("terrain.radius_hi", 0.30);
  app.terrain.max_height = cfg.get_double("terrain.max_height", 0.45);
  app.terrain.ramp_angle = cfg.get_double("terrain.ramp_angle", 0.20);
  app.terrain.base = cfg.get_double("terrain.base", 0.0);
  app.terrain_count = cfg.get_int("terrain.count", app.terrain_count);

  app.patch.patch_cells = cfg.get_int("patch.cells", app.patch.patch_cells);
  app.patch.angles = cfg.get_doubles("patch.angles", app.patch.angles);

  app.geom = VehicleGeometry::box(cfg.get_double("vehicle.wheelbase", 0.31),
                                  cfg.get_double("vehicle.track", 0.20),
                                  cfg.get_double("vehicle.clearance", 0.08));

  app.sim.dt = cfg.get_double("sim.dt", app.sim.dt);
  app.sim.slip_gain = cfg.get_double("sim.slip_gain", app.sim.slip_gain);
  app.sim.roughness_gain = cfg.get_double("sim.roughness_gain", app.sim.roughness_gain);
  app.sim.actuation_tau = cfg.get_double("sim.actuation_tau", app.sim.actuation_tau);
  app.sim.stuck_slope = cfg.get_double("sim.stuck_slope", app.sim.stuck_slope);
  app.sim.rollover_threshold =
      cfg.get_double("sim.rollover_threshold", app.sim.rollover_threshold);
  app.sim.v_max = cfg.get_double("sim.v_max", app.sim.v_max);
  app.sim.omega_max = cfg.get_double("sim.omega_max", app.sim.omega_max);

  app.policy.v_mean = cfg.get_double("policy.v_mean", app.policy.v_mean);
  app.policy.theta = cfg.get_double("policy.theta", app.policy.theta);
  app.policy.sigma_v = cfg.get_double("policy.sigma_v", app.policy.sigma_v);
  app.policy.sigma_omega = cfg.get_double("policy.sigma_omega", app.policy.sigma_omega);

  app.collect.steps_per_map = cfg.get_int("collect.steps_per_map", app.collect.steps_per_map);
  app.collect.horizon = cfg.get_int("collect.horizon", app.collect.horizon);
  app.collect.pose_stride = cfg.get_int("collect.pose_stride", app.collect.pose_stride);

  const std::vector<int> hidden = cfg.get_ints("model.hidden", {128, 64});
  const Activation act = activation_from_string(cfg.get_string("model.activation", "tanh"));
  const double sigma_floor = cfg.get_double("model.sigma_floor", 1e-3);
  const double input_scale = cfg.get_double("model.input_scale", 0.25);
  app.vel_reg = RegressorSpec{app.patch.patch_cells, hidden, 2, act, sigma_floor, input_scale};
  app.pose_reg = RegressorSpec{app.patch.patch_cells, hidden, 4, act, sigma_floor, input_scale};

  app.train.learning_rate = cfg.get_double("train.lr", app.train.learning_rate);
  app.train.batch_size = cfg.get_int("train.batch", app.train.batch_size);
  app.train.epochs = cfg.get_int("train.epochs", app.train.epochs);
  app.train.validation_fraction =
      cfg.get_double("train.val_fraction", app.train.validation_fraction);
  app.train.optimizer = optimizer_from_string(cfg.get_string("train.optimizer", "adam"));

  app.labels.stride = cfg.get_int("labels.stride", app.labels.stride);
  app.normalize_weights = cfg.get_bool("labels.normalize", app.normalize_weights);

  app.weights.w1 = to_array2(cfg.get_doubles("weights.w1", {1.0, 1.0}), "weights.w1");
  app.weights.w2 = to_array4(cfg.get_doubles("weights.w2", {0.5, 1.0, 0.5, 1.0}), "weights.w2");
  app.weights.w3 = to_array8(
      cfg.get_doubles("weights.w3", {0.25, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25}),
      "weights.w3");
  app.weights.validate();

  app.encoder.window_cells = cfg.get_int("encoder.window", app.encoder.window_cells);
  app.encoder.hidden = cfg.get_ints("encoder.hidden", app.encoder.hidden);
  app.encoder.act = activation_from_string(
      cfg.get_string("encoder.activation", to_string(app.encoder.act)));
  app.encoder.input_scale = cfg.get_double("encoder.input_scale", app.encoder.input_scale);
  app.encoder.margin_cells = patch_margin_cells(app.patch);
  app.encoder_train.base.learning_rate = cfg.get_double("encoder.lr", 2e-3);
  app.encoder_train.base.batch_size = cfg.get_int("encoder.batch", 64);
  app.encoder_train.base.epochs = cfg.get_int("encoder.epochs", 30);
  app.encoder_train.base.validation_fraction = cfg.get_double("encoder.val_fraction", 0.1);
  app.encoder_train.cells_per_epoch = cfg.get_int("encoder.cells_per_epoch", 8000);

  app.run = RunConfig::defaults();
  app.run.geom = app.geom;
  app.run.sim = app.sim;
  app.run.tnt = read_mppi(cfg, "mppi.tnt", app.run.tnt);
  app.run.tal = read_mppi(cfg, "mppi.tal", app.run.tal);
  app.run.wmvct = read_mppi(cfg, "mppi.wmvct", app.run.wmvct);
  app.run.astar_beta = cfg.get_double("astar.beta", app.run.astar_beta);
  app.run.coarse_height = cfg.get_int("coarse.height_cells", app.run.coarse_height);
  app.run.coarse_width = cfg.get_int("coarse.width_cells", app.run.coarse_width);
  app.run.tracker_lookahead = cfg.get_double("tracker.lookahead", app.run.tracker_lookahead);
  app.run.tracker.cruise_speed = cfg.get_double("tracker.cruise_speed", 0.5);
  app.run.tracker.goal_tolerance = cfg.get_double("tracker.goal_tolerance", 0.1);
  app.run.tracker.v_max = app.sim.v_max;
  app.run.tracker.omega_max = app.sim.omega_max;
  app.run.tm_update_every = cfg.get_int("bench.tm_every", app.run.tm_update_every);
  app.run.mask_tau_percentile =
      cfg.get_double("mppi.tau_percentile", app.run.mask_tau_percentile);
  app.run.stuck_window = cfg.get_double("bench.stuck_window", app.run.stuck_window);
  app.run.stuck_displacement =
      cfg.get_double("bench.stuck_displacement", app.run.stuck_displacement);

  app.bench.scenario_count = cfg.get_int("bench.scenarios", app.bench.scenario_count);
  app.bench.terrain = app.terrain;
  app.bench.map_height = app.map_height;
  app.bench.map_width = app.map_width;
  app.bench.resolution = app.resolution;
  app.bench.time_limit = cfg.get_double("bench.time_limit", app.bench.time_limit);
  app.bench.success_radius = cfg.get_double("bench.success_radius", app.bench.success_radius);
  app.bench.start_margin = cfg.get_double("bench.start_margin", app.bench.start_margin);

  return app;
}

AppConfig load_app_config(const std::string& path_or_empty) {
  if (path_or_empty.empty()) return AppConfig::from_config(Config{});
  return AppConfig::from_config(Config::from_file(path_or_empty));
}

}  // namespace tnav::app
