#pragma once

#include <vector>

#include "tnav/elevation_map.hpp"

namespace tnav {

// Footprint window parameters shared by label generation and dataset
// collection: square side in cells plus the ordered candidate yaw set.
struct PatchSpec {
  int patch_cells = 24;
  std::vector<double> angles = {-1.5707963267948966, -0.7853981633974483, 0.0,
                                0.7853981633974483, 1.5707963267948966};

  void validate() const;  // throws SpecError
};

// Orientation-aligned height window. The first axis runs along the vehicle's
// forward direction, the second along its left; cell (a, b) sits at local
// offset ((a - patch_cells/2) * resolution, (b - patch_cells/2) * resolution)
// in the vehicle frame. At yaw 0 the patch is the axis-aligned sub-window of
// the source map centered on cell (m, n).
struct TerrainPatch {
  int patch_cells = 0;
  int center_m = 0;
  int center_n = 0;
  double yaw = 0.0;
  double resolution = 0.0;
  std::vector<double> cells;  // patch_cells^2, row-major (forward-major)

  double at(int a, int b) const {
    return cells[static_cast<std::size_t>(a) * patch_cells + b];
  }
  double mean() const;
};

// Samples height_at over the rotated footprint. Throws BoundsError when any
// sample point leaves the map extent; callers treat such centers as
// non-traversable.
TerrainPatch extract_patch(const ElevationMap& map, int m, int n, double yaw,
                           const PatchSpec& spec);

// Width in cells of the border band where some patch orientation in `spec`
// exits the map; centers at least this far from every edge always extract.
int patch_margin_cells(const PatchSpec& spec);

// Bilinear lookup inside a patch at a vehicle-frame offset (meters, forward
// and left of the patch center). Throws SpecError when the offset leaves the
// patch (footprint larger than the patch).
double patch_height_at(const TerrainPatch& patch, double forward, double left);

}  // namespace tnav
