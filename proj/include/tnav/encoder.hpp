#pragma once

#include <string>
#include <vector>

#include "tnav/regressor.hpp"
#include "tnav/tmap.hpp"

namespace tnav {

// Sliding per-cell reconstruction network: an axis-aligned local height
// window around each cell (mean-centered, scaled) maps to that cell's 14
// channels. One pass over the map replaces the per-orientation label
// pipeline, so inference cost is independent of the orientation-set size.
struct EncoderSpec {
  int window_cells = 16;
  int margin_cells = 18;  // validity band, mirrors the label maps it learned from
  std::vector<int> hidden = {48, 24};
  Activation act = Activation::Tanh;
  double input_scale = 0.25;

  int input_size() const { return window_cells * window_cells; }
  void validate() const;
};

class MapEncoder {
 public:
  MapEncoder() = default;
  MapEncoder(EncoderSpec spec, Mlp net, std::array<double, kNumChannels> shift,
             std::array<double, kNumChannels> scale);

  static MapEncoder init(const EncoderSpec& spec, std::uint64_t seed);

  const EncoderSpec& spec() const { return spec_; }
  const Mlp& net() const { return net_; }
  Mlp& net() { return net_; }
  const std::array<double, kNumChannels>& target_shift() const { return shift_; }
  const std::array<double, kNumChannels>& target_scale() const { return scale_; }
  void set_target_stats(const std::array<double, kNumChannels>& shift,
                        const std::array<double, kNumChannels>& scale);

  // Denormalized channel prediction for the window centered at (m, n); the
  // window must fit inside the grid.
  ChannelVector predict_cell(const ElevationMap& map, int m, int n, MlpWorkspace& ws) const;

 private:
  EncoderSpec spec_;
  Mlp net_;
  std::array<double, kNumChannels> shift_{};
  std::array<double, kNumChannels> scale_{};

  friend struct EncoderTrainer;
};

struct EncoderPair {
  const ElevationMap* map = nullptr;
  const TraversabilityMap* labels = nullptr;
};

struct EncoderTrainConfig {
  TrainConfig base;
  int cells_per_epoch = 8000;  // training cells drawn per epoch
};

// Minimizes the mean absolute channel reconstruction error over valid label
// cells. Deterministic given the seed; returns per-epoch train/val MAE and
// leaves the encoder at its best-validation snapshot.
TrainHistory train_encoder(MapEncoder& enc, const std::vector<EncoderPair>& pairs,
                           const EncoderTrainConfig& cfg);

// Single forward pass over every cell inside the validity band. sigma slots
// are floored at a tiny positive value and roll/pitch slots at zero so the
// channel invariants hold; invalid border cells carry the maximum combined
// value. Throws SpecError when the window does not fit the map.
TraversabilityMap infer_map(const MapEncoder& enc, const ElevationMap& map,
                            const CombineWeights& weights);

// Mean absolute channel error of the encoder against a label map, over cells
// valid in both; the oracle-side fidelity measure.
double reconstruction_mae(const MapEncoder& enc, const ElevationMap& map,
                          const TraversabilityMap& labels);

// TNTE encoder file: magic "TNTE", version, descriptor, target stats,
// f64 parameters.
void write_encoder(const MapEncoder& enc, const std::string& path);
MapEncoder read_encoder(const std::string& path);

}  // namespace tnav
