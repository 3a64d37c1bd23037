#pragma once

#include <cstdint>
#include <vector>

namespace tnav {

// 2.5D height grid. The first array axis (index m, size height_cells) runs
// along world x, the second (index n, size width_cells) along world y, so a
// vehicle at yaw 0 drives along increasing m. Heights are stored row-major;
// cell (m, n) is centered at
//   x = origin_x + (m + 0.5) * resolution
//   y = origin_y + (n + 0.5) * resolution.
//
// Maps are immutable after construction; every query below is pure and safe
// to call concurrently.
struct ElevationMap {
  int height_cells = 0;  // H, cells along world x
  int width_cells = 0;   // W, cells along world y
  double resolution = 0.0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  std::vector<double> heights;       // H*W, row-major
  std::vector<std::uint8_t> unknown;  // 1 where the value was inpainted

  double at(int m, int n) const { return heights[static_cast<std::size_t>(m) * width_cells + n]; }
  bool in_grid(int m, int n) const {
    return m >= 0 && m < height_cells && n >= 0 && n < width_cells;
  }

  double extent_x() const { return height_cells * resolution; }
  double extent_y() const { return width_cells * resolution; }
  bool in_extent(double x, double y) const {
    return x >= origin_x && x <= origin_x + extent_x() && y >= origin_y &&
           y <= origin_y + extent_y();
  }

  double cell_center_x(int m) const { return origin_x + (m + 0.5) * resolution; }
  double cell_center_y(int n) const { return origin_y + (n + 0.5) * resolution; }

  // Nearest cell to a world point (no bounds check beyond clamping).
  int cell_m(double x) const;
  int cell_n(double y) const;
};

// Validates dimensions, replaces non-finite known cells by unknown ones, and
// assigns every unknown cell the value of its nearest known cell (Euclidean
// distance, ties broken by row-major order). Throws SpecError when the grid
// is degenerate or every cell is unknown.
ElevationMap make_elevation_map(int height_cells, int width_cells, double resolution,
                                double origin_x, double origin_y, std::vector<double> heights,
                                std::vector<std::uint8_t> unknown = {});

// In-place inpainting used by make_elevation_map and the readers. Idempotent.
void inpaint_unknown(ElevationMap& map);

// Bilinear interpolation of the four surrounding cell centers; exact at cell
// centers and continuous everywhere inside the extent (edge cells extend
// into the outer half-cell ring). Throws BoundsError outside the extent,
// naming the offending coordinate.
double height_at(const ElevationMap& map, double x, double y);

// As height_at but clamps the query point to the extent instead of throwing.
double height_at_clamped(const ElevationMap& map, double x, double y);

}  // namespace tnav
