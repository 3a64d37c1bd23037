#pragma once

// Config-file schema shared by the CLI subcommands. Every knob has a default
// so an empty config runs the desk-scale pipeline end to end.

#include <string>

#include "tnav/bench.hpp"
#include "tnav/config.hpp"
#include "tnav/dataset.hpp"
#include "tnav/encoder.hpp"

namespace tnav::app {

struct AppConfig {
  // map geometry
  int map_height = 160;
  int map_width = 128;
  double resolution = 0.025;

  // terrain generation
  TerrainGenSpec terrain;
  int terrain_count = 24;

  PatchSpec patch;
  VehicleGeometry geom = VehicleGeometry::box(0.31, 0.20, 0.08);
  SimParams sim;
  RandomWalkPolicy policy;
  CollectConfig collect;

  // uncertainty regressors
  RegressorSpec vel_reg;
  RegressorSpec pose_reg;
  TrainConfig train;

  // label maps & combination weights
  LabelConfig labels;
  bool normalize_weights = true;
  CombineWeights weights;

  // map encoder
  EncoderSpec encoder;
  EncoderTrainConfig encoder_train;

  // planners
  RunConfig run;
  BenchConfig bench;

  static AppConfig from_config(const Config& cfg);
};

AppConfig load_app_config(const std::string& path_or_empty);

}  // namespace tnav::app
