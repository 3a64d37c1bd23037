#pragma once

#include <string>

#include "tnav/channels.hpp"
#include "tnav/elevation_map.hpp"

namespace tnav {

// Per-cell 14-channel traversability values plus the combined scalar
// (higher = less traversable). Channels are stored channel-major
// (channel, then row-major cells). Cells whose patch could not be extracted
// are invalid and carry the maximum combined value present in the map.
struct TraversabilityMap {
  int height_cells = 0;
  int width_cells = 0;
  double resolution = 0.0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  std::vector<float> channels;       // 14 * H * W
  std::vector<float> combined;       // H * W
  std::vector<std::uint8_t> valid;   // H * W
  CombineWeights weights;            // the stored (effective) weights

  std::size_t cell_count() const {
    return static_cast<std::size_t>(height_cells) * width_cells;
  }
  std::size_t cell_index(int m, int n) const {
    return static_cast<std::size_t>(m) * width_cells + n;
  }
  float channel_at(int c, int m, int n) const {
    return channels[static_cast<std::size_t>(c) * cell_count() + cell_index(m, n)];
  }
  ChannelVector channel_vector(int m, int n) const;
  bool in_grid(int m, int n) const {
    return m >= 0 && m < height_cells && n >= 0 && n < width_cells;
  }
  int cell_m(double x) const;
  int cell_n(double y) const;

  double max_combined() const;
  // q-quantile (0..1) of the combined values over valid cells.
  double combined_percentile(double q) const;
};

struct LabelConfig {
  int stride = 2;  // cell subsampling; skipped cells are filled by interpolation
};

// Ground-truth label map: per valid cell the channel vector is the mean over
// the orientation set of the per-patch channels, and the combined value is
// the weighted sum under `weights`. Lattice cells are computed exactly on a
// `stride` grid and the rest of the valid region is filled by bilinear
// interpolation of the lattice. Parallel over cells, deterministic.
TraversabilityMap build_label_map(const ElevationMap& map, const PatchSpec& spec,
                                  const VehicleGeometry& geom, const Regressor& vel_reg,
                                  const Regressor& pose_reg, const CombineWeights& weights,
                                  const LabelConfig& cfg = {});

// Per-channel standard deviation over the valid cells of a label-map set;
// feeds normalize_weights.
std::array<double, kNumChannels> channel_sigma(const std::vector<TraversabilityMap>& maps);

// Coarse cost grid for grid planners. Block-average pooling of the combined
// channel with a near-uniform block partition; invalid cells are excluded
// from block means and fully-invalid blocks get the map's maximum combined
// value.
struct CostGrid {
  int height_cells = 0;
  int width_cells = 0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double cell_size_x = 0.0;
  double cell_size_y = 0.0;
  std::vector<double> cost;  // H * W, row-major, all finite and >= 0

  double at(int m, int n) const { return cost[static_cast<std::size_t>(m) * width_cells + n]; }
  bool in_grid(int m, int n) const {
    return m >= 0 && m < height_cells && n >= 0 && n < width_cells;
  }
  double center_x(int m) const { return origin_x + (m + 0.5) * cell_size_x; }
  double center_y(int n) const { return origin_y + (n + 0.5) * cell_size_y; }
  int cell_m(double x) const;
  int cell_n(double y) const;
};

CostGrid downsample(const TraversabilityMap& tm, int out_height, int out_width);

// TMAP binary format: magic "TMAP", u16 version, geometry header as EMAP,
// u8 channel count (14), channels f32 (channel-major), combined f32,
// valid mask bytes, the stored CombineWeights (f64 x14).
void write_tmap(const TraversabilityMap& tm, const std::string& path);
TraversabilityMap read_tmap(const std::string& path);

}  // namespace tnav
