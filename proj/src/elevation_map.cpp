#include "tnav/elevation_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tnav/error.hpp"

namespace tnav {

int ElevationMap::cell_m(double x) const {
  const int m = static_cast<int>(std::floor((x - origin_x) / resolution));
  return std::clamp(m, 0, height_cells - 1);
}

int ElevationMap::cell_n(double y) const {
  const int n = static_cast<int>(std::floor((y - origin_y) / resolution));
  return std::clamp(n, 0, width_cells - 1);
}

void inpaint_unknown(ElevationMap& map) {
  const int h = map.height_cells;
  const int w = map.width_cells;
  bool any_known = false;
  for (std::size_t i = 0; i < map.heights.size(); ++i) {
    if (!map.unknown[i] && !std::isfinite(map.heights[i])) map.unknown[i] = 1;
    if (!map.unknown[i]) any_known = true;
  }
  bool any_unknown = false;
  for (const auto u : map.unknown) {
    if (u) {
      any_unknown = true;
      break;
    }
  }
  if (!any_unknown) return;
  if (!any_known) throw SpecError("elevation map has no known cells to inpaint from");

  // Expanding ring search per unknown cell. Within a ring all candidates at
  // the best Euclidean distance are compared and the row-major smallest wins;
  // the search stops once the ring's minimum possible distance exceeds the
  // best found.
  std::vector<double> filled = map.heights;
  for (int m = 0; m < h; ++m) {
    for (int n = 0; n < w; ++n) {
      const std::size_t idx = static_cast<std::size_t>(m) * w + n;
      if (!map.unknown[idx]) continue;
      double best_d2 = std::numeric_limits<double>::infinity();
      long best_rm = -1;
      double best_val = 0.0;
      const int max_r = std::max(std::max(m, h - 1 - m), std::max(n, w - 1 - n));
      for (int r = 1; r <= max_r; ++r) {
        if (static_cast<double>(r) * r > best_d2) break;
        for (int dm = -r; dm <= r; ++dm) {
          const int mm = m + dm;
          if (mm < 0 || mm >= h) continue;
          const bool edge_row = (dm == -r || dm == r);
          const int step = edge_row ? 1 : 2 * r;
          for (int dn = -r; dn <= r; dn += step) {
            const int nn = n + dn;
            if (nn < 0 || nn >= w) continue;
            const std::size_t j = static_cast<std::size_t>(mm) * w + nn;
            if (map.unknown[j]) continue;
            const double d2 = static_cast<double>(dm) * dm + static_cast<double>(dn) * dn;
            const long rm = static_cast<long>(j);
            if (d2 < best_d2 || (d2 == best_d2 && rm < best_rm)) {
              best_d2 = d2;
              best_rm = rm;
              best_val = map.heights[j];
            }
          }
        }
      }
      filled[idx] = best_val;
    }
  }
  map.heights = std::move(filled);
}

ElevationMap make_elevation_map(int height_cells, int width_cells, double resolution,
                                double origin_x, double origin_y, std::vector<double> heights,
                                std::vector<std::uint8_t> unknown) {
  if (height_cells < 2 || width_cells < 2) {
    throw SpecError("elevation map needs at least 2x2 cells, got " +
                    std::to_string(height_cells) + "x" + std::to_string(width_cells));
  }
  if (!(resolution > 0.0)) throw SpecError("elevation map resolution must be > 0");
  const std::size_t cells = static_cast<std::size_t>(height_cells) * width_cells;
  if (heights.size() != cells) {
    throw SpecError("elevation map height array size mismatch: expected " +
                    std::to_string(cells) + ", got " + std::to_string(heights.size()));
  }
  if (unknown.empty()) unknown.assign(cells, 0);
  if (unknown.size() != cells) throw SpecError("elevation map unknown mask size mismatch");

  ElevationMap map;
  map.height_cells = height_cells;
  map.width_cells = width_cells;
  map.resolution = resolution;
  map.origin_x = origin_x;
  map.origin_y = origin_y;
  map.heights = std::move(heights);
  map.unknown = std::move(unknown);
  inpaint_unknown(map);
  return map;
}

namespace {

double bilinear(const ElevationMap& map, double x, double y) {
  // Grid coordinates in cell-center units.
  const double gm = (x - map.origin_x) / map.resolution - 0.5;
  const double gn = (y - map.origin_y) / map.resolution - 0.5;
  int m0 = static_cast<int>(std::floor(gm));
  int n0 = static_cast<int>(std::floor(gn));
  double fm = gm - m0;
  double fn = gn - n0;
  if (m0 < 0) {
    m0 = 0;
    fm = 0.0;
  } else if (m0 > map.height_cells - 2) {
    m0 = map.height_cells - 2;
    fm = gm - m0;
    if (fm > 1.0) fm = 1.0;
  }
  if (n0 < 0) {
    n0 = 0;
    fn = 0.0;
  } else if (n0 > map.width_cells - 2) {
    n0 = map.width_cells - 2;
    fn = gn - n0;
    if (fn > 1.0) fn = 1.0;
  }
  const double h00 = map.at(m0, n0);
  const double h01 = map.at(m0, n0 + 1);
  const double h10 = map.at(m0 + 1, n0);
  const double h11 = map.at(m0 + 1, n0 + 1);
  const double a = h00 + (h01 - h00) * fn;
  const double b = h10 + (h11 - h10) * fn;
  return a + (b - a) * fm;
}

}  // namespace

double height_at(const ElevationMap& map, double x, double y) {
  if (!map.in_extent(x, y)) {
    throw BoundsError("height query outside map extent: x=" + std::to_string(x) +
                      " y=" + std::to_string(y));
  }
  return bilinear(map, x, y);
}

double height_at_clamped(const ElevationMap& map, double x, double y) {
  const double cx = std::clamp(x, map.origin_x, map.origin_x + map.extent_x());
  const double cy = std::clamp(y, map.origin_y, map.origin_y + map.extent_y());
  return bilinear(map, cx, cy);
}

}  // namespace tnav
