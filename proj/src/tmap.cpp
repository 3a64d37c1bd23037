#include "tnav/tmap.hpp"

#include <algorithm>
#include <cmath>

#include "serial.hpp"
#include "tnav/error.hpp"
#include "tnav/parallel.hpp"

namespace tnav {

ChannelVector TraversabilityMap::channel_vector(int m, int n) const {
  ChannelVector ch;
  const std::size_t cells = cell_count();
  const std::size_t idx = cell_index(m, n);
  for (int c = 0; c < kNumChannels; ++c) {
    ch[c] = channels[static_cast<std::size_t>(c) * cells + idx];
  }
  return ch;
}

int TraversabilityMap::cell_m(double x) const {
  const int m = static_cast<int>(std::floor((x - origin_x) / resolution));
  return std::clamp(m, 0, height_cells - 1);
}

int TraversabilityMap::cell_n(double y) const {
  const int n = static_cast<int>(std::floor((y - origin_y) / resolution));
  return std::clamp(n, 0, width_cells - 1);
}

double TraversabilityMap::max_combined() const {
  double mx = 0.0;
  for (std::size_t i = 0; i < combined.size(); ++i) {
    if (valid[i] && combined[i] > mx) mx = combined[i];
  }
  return mx;
}

double TraversabilityMap::combined_percentile(double q) const {
  std::vector<float> vals;
  vals.reserve(combined.size());
  for (std::size_t i = 0; i < combined.size(); ++i) {
    if (valid[i]) vals.push_back(combined[i]);
  }
  if (vals.empty()) return 0.0;
  std::sort(vals.begin(), vals.end());
  const double qq = std::clamp(q, 0.0, 1.0);
  const std::size_t idx = static_cast<std::size_t>(qq * static_cast<double>(vals.size() - 1));
  return vals[idx];
}

TraversabilityMap build_label_map(const ElevationMap& map, const PatchSpec& spec,
                                  const VehicleGeometry& geom, const Regressor& vel_reg,
                                  const Regressor& pose_reg, const CombineWeights& weights,
                                  const LabelConfig& cfg) {
  spec.validate();
  weights.validate();
  if (cfg.stride < 1) throw SpecError("label stride must be >= 1");

  TraversabilityMap tm;
  tm.height_cells = map.height_cells;
  tm.width_cells = map.width_cells;
  tm.resolution = map.resolution;
  tm.origin_x = map.origin_x;
  tm.origin_y = map.origin_y;
  tm.weights = weights;
  const std::size_t cells = tm.cell_count();
  tm.channels.assign(static_cast<std::size_t>(kNumChannels) * cells, 0.0f);
  tm.combined.assign(cells, 0.0f);
  tm.valid.assign(cells, 0);

  const int margin = patch_margin_cells(spec);
  const int lo_m = margin, hi_m = map.height_cells - 1 - margin;
  const int lo_n = margin, hi_n = map.width_cells - 1 - margin;
  if (lo_m > hi_m || lo_n > hi_n) return tm;  // patch never fits: all invalid

  // Lattice coordinates: stride grid plus the far edge of the valid region.
  auto lattice = [&](int lo, int hi) {
    std::vector<int> v;
    for (int i = lo; i <= hi; i += cfg.stride) v.push_back(i);
    if (v.back() != hi) v.push_back(hi);
    return v;
  };
  const std::vector<int> lat_m = lattice(lo_m, hi_m);
  const std::vector<int> lat_n = lattice(lo_n, hi_n);
  const std::size_t lm = lat_m.size(), ln = lat_n.size();

  // Orientation-averaged channels on the lattice (parallel, pure per cell).
  // mu slots enter as absolute values before averaging: a discrepancy in
  // either direction is a cost, and signed means across orientations would
  // cancel. All stored channels are therefore non-negative and the combined
  // value is linear in them.
  std::vector<ChannelVector> lattice_ch(lm * ln);
  const double inv_angles = 1.0 / static_cast<double>(spec.angles.size());
  parallel_for(lm * ln, [&](std::size_t i) {
    const int m = lat_m[i / ln];
    const int n = lat_n[i % ln];
    ChannelVector acc{};
    for (const double yaw : spec.angles) {
      const TerrainPatch patch = extract_patch(map, m, n, yaw, spec);
      const ChannelVector ch = patch_channels(patch, geom, vel_reg, pose_reg);
      for (int c = 0; c < kNumChannels; ++c) {
        acc[c] += channel_is_mu(c) ? std::abs(ch[c]) : ch[c];
      }
    }
    for (int c = 0; c < kNumChannels; ++c) acc[c] *= inv_angles;
    lattice_ch[i] = acc;
  });

  // Segment index/weight per valid row and column for the interpolation fill.
  struct Seg {
    std::size_t i0, i1;
    double t;
  };
  auto segments = [&](const std::vector<int>& lat, int lo, int hi) {
    std::vector<Seg> segs(hi - lo + 1);
    std::size_t k = 0;
    for (int c = lo; c <= hi; ++c) {
      while (k + 1 < lat.size() && lat[k + 1] <= c) ++k;
      const std::size_t k1 = std::min(k + 1, lat.size() - 1);
      const int span = lat[k1] - lat[k];
      segs[c - lo] = {k, k1, span == 0 ? 0.0 : static_cast<double>(c - lat[k]) / span};
    }
    return segs;
  };
  const std::vector<Seg> seg_m = segments(lat_m, lo_m, hi_m);
  const std::vector<Seg> seg_n = segments(lat_n, lo_n, hi_n);

  const std::size_t valid_rows = static_cast<std::size_t>(hi_m - lo_m + 1);
  const std::size_t valid_cols = static_cast<std::size_t>(hi_n - lo_n + 1);
  parallel_for(valid_rows * valid_cols, [&](std::size_t i) {
    const int m = lo_m + static_cast<int>(i / valid_cols);
    const int n = lo_n + static_cast<int>(i % valid_cols);
    const Seg& sm = seg_m[m - lo_m];
    const Seg& sn = seg_n[n - lo_n];
    const ChannelVector& c00 = lattice_ch[sm.i0 * ln + sn.i0];
    const ChannelVector& c01 = lattice_ch[sm.i0 * ln + sn.i1];
    const ChannelVector& c10 = lattice_ch[sm.i1 * ln + sn.i0];
    const ChannelVector& c11 = lattice_ch[sm.i1 * ln + sn.i1];
    ChannelVector ch;
    for (int c = 0; c < kNumChannels; ++c) {
      const double a = c00[c] + (c01[c] - c00[c]) * sn.t;
      const double b = c10[c] + (c11[c] - c10[c]) * sn.t;
      ch[c] = a + (b - a) * sm.t;
    }
    const std::size_t idx = tm.cell_index(m, n);
    for (int c = 0; c < kNumChannels; ++c) {
      tm.channels[static_cast<std::size_t>(c) * cells + idx] = static_cast<float>(ch[c]);
    }
    tm.combined[idx] = static_cast<float>(combine(ch, weights));
    tm.valid[idx] = 1;
  });

  // Invalid cells carry the worst combined value present in the map.
  const float worst = static_cast<float>(tm.max_combined());
  for (std::size_t i = 0; i < cells; ++i) {
    if (!tm.valid[i]) tm.combined[i] = worst;
  }
  return tm;
}

std::array<double, kNumChannels> channel_sigma(const std::vector<TraversabilityMap>& maps) {
  std::array<double, kNumChannels> mean{}, sq{};
  std::size_t count = 0;
  for (const auto& tm : maps) {
    const std::size_t cells = tm.cell_count();
    for (std::size_t i = 0; i < cells; ++i) {
      if (!tm.valid[i]) continue;
      ++count;
      for (int c = 0; c < kNumChannels; ++c) {
        const double v = tm.channels[static_cast<std::size_t>(c) * cells + i];
        mean[c] += v;
        sq[c] += v * v;
      }
    }
  }
  std::array<double, kNumChannels> sigma{};
  if (count == 0) return sigma;
  for (int c = 0; c < kNumChannels; ++c) {
    mean[c] /= static_cast<double>(count);
    const double var = sq[c] / static_cast<double>(count) - mean[c] * mean[c];
    sigma[c] = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  return sigma;
}

int CostGrid::cell_m(double x) const {
  const int m = static_cast<int>(std::floor((x - origin_x) / cell_size_x));
  return std::clamp(m, 0, height_cells - 1);
}

int CostGrid::cell_n(double y) const {
  const int n = static_cast<int>(std::floor((y - origin_y) / cell_size_y));
  return std::clamp(n, 0, width_cells - 1);
}

CostGrid downsample(const TraversabilityMap& tm, int out_height, int out_width) {
  if (out_height < 1 || out_width < 1) throw SpecError("downsample output dims must be >= 1");
  if (out_height > tm.height_cells || out_width > tm.width_cells) {
    throw SpecError("downsample output dims exceed map dims");
  }
  CostGrid grid;
  grid.height_cells = out_height;
  grid.width_cells = out_width;
  grid.origin_x = tm.origin_x;
  grid.origin_y = tm.origin_y;
  grid.cell_size_x = tm.height_cells * tm.resolution / out_height;
  grid.cell_size_y = tm.width_cells * tm.resolution / out_width;
  grid.cost.assign(static_cast<std::size_t>(out_height) * out_width, 0.0);

  const double worst = tm.max_combined();
  for (int i = 0; i < out_height; ++i) {
    const int m0 = static_cast<int>((static_cast<long>(i) * tm.height_cells) / out_height);
    const int m1 = static_cast<int>((static_cast<long>(i + 1) * tm.height_cells) / out_height);
    for (int j = 0; j < out_width; ++j) {
      const int n0 = static_cast<int>((static_cast<long>(j) * tm.width_cells) / out_width);
      const int n1 = static_cast<int>((static_cast<long>(j + 1) * tm.width_cells) / out_width);
      double sum = 0.0;
      std::size_t cnt = 0;
      for (int m = m0; m < m1; ++m) {
        for (int n = n0; n < n1; ++n) {
          const std::size_t idx = tm.cell_index(m, n);
          if (!tm.valid[idx]) continue;
          sum += tm.combined[idx];
          ++cnt;
        }
      }
      grid.cost[static_cast<std::size_t>(i) * out_width + j] = cnt == 0 ? worst : sum / cnt;
    }
  }
  return grid;
}

namespace {
constexpr char kMagic[4] = {'T', 'M', 'A', 'P'};
constexpr std::uint16_t kVersion = 1;
}  // namespace

void write_tmap(const TraversabilityMap& tm, const std::string& path) {
  serial::Writer w(path);
  w.magic(kMagic);
  w.u16(kVersion);
  w.u32(static_cast<std::uint32_t>(tm.height_cells));
  w.u32(static_cast<std::uint32_t>(tm.width_cells));
  w.f64(tm.resolution);
  w.f64(tm.origin_x);
  w.f64(tm.origin_y);
  w.u8(kNumChannels);
  for (const float v : tm.channels) w.f32(v);
  for (const float v : tm.combined) w.f32(v);
  w.bytes(tm.valid.data(), tm.valid.size());
  for (const double v : tm.weights.flat()) w.f64(v);
  w.close();
}

TraversabilityMap read_tmap(const std::string& path) {
  serial::Reader r(path);
  r.expect_magic(kMagic);
  const std::uint16_t version = r.u16("version");
  if (version != kVersion) {
    throw FormatError("unsupported TMAP version " + std::to_string(version) + " in " + path);
  }
  TraversabilityMap tm;
  tm.height_cells = static_cast<int>(r.u32("height_cells"));
  tm.width_cells = static_cast<int>(r.u32("width_cells"));
  if (tm.height_cells < 1 || tm.width_cells < 1 || tm.height_cells > (1 << 20) ||
      tm.width_cells > (1 << 20)) {
    throw FormatError("implausible TMAP dimensions in " + path);
  }
  tm.resolution = r.f64("resolution");
  tm.origin_x = r.f64("origin_x");
  tm.origin_y = r.f64("origin_y");
  const std::uint8_t nch = r.u8("channel count");
  if (nch != kNumChannels) throw FormatError("unexpected TMAP channel count in " + path);
  const std::size_t cells = tm.cell_count();
  tm.channels.resize(static_cast<std::size_t>(kNumChannels) * cells);
  for (auto& v : tm.channels) v = r.f32("channels");
  tm.combined.resize(cells);
  for (auto& v : tm.combined) v = r.f32("combined");
  tm.valid.resize(cells);
  r.bytes(tm.valid.data(), cells, "valid mask");
  std::array<double, kNumChannels> flat;
  for (auto& v : flat) v = r.f64("weights");
  tm.weights = CombineWeights::from_flat(flat);
  return tm;
}

}  // namespace tnav
