#include "tnav/patch.hpp"

#include <cmath>
#include <string>

#include "tnav/error.hpp"
#include "tnav/geometry.hpp"

namespace tnav {

void PatchSpec::validate() const {
  if (patch_cells < 2) throw SpecError("patch_cells must be >= 2");
  if (angles.empty()) throw SpecError("patch angle set must be non-empty");
  for (const double a : angles) {
    if (!(a >= -kPi && a < kPi)) {
      throw SpecError("patch angle out of [-pi, pi): " + std::to_string(a));
    }
  }
}

double TerrainPatch::mean() const {
  double s = 0.0;
  for (const double c : cells) s += c;
  return s / static_cast<double>(cells.size());
}

TerrainPatch extract_patch(const ElevationMap& map, int m, int n, double yaw,
                           const PatchSpec& spec) {
  spec.validate();
  if (!map.in_grid(m, n)) {
    throw BoundsError("patch center outside grid: m=" + std::to_string(m) +
                      " n=" + std::to_string(n));
  }
  const int p = spec.patch_cells;
  const int c = p / 2;
  const double res = map.resolution;
  const double cx = map.cell_center_x(m);
  const double cy = map.cell_center_y(n);
  const double cos_y = std::cos(yaw);
  const double sin_y = std::sin(yaw);

  TerrainPatch patch;
  patch.patch_cells = p;
  patch.center_m = m;
  patch.center_n = n;
  patch.yaw = yaw;
  patch.resolution = res;
  patch.cells.resize(static_cast<std::size_t>(p) * p);
  for (int a = 0; a < p; ++a) {
    const double fwd = (a - c) * res;
    for (int b = 0; b < p; ++b) {
      const double left = (b - c) * res;
      const double x = cx + cos_y * fwd - sin_y * left;
      const double y = cy + sin_y * fwd + cos_y * left;
      patch.cells[static_cast<std::size_t>(a) * p + b] = height_at(map, x, y);
    }
  }
  return patch;
}

int patch_margin_cells(const PatchSpec& spec) {
  const int c = spec.patch_cells / 2;
  const double lo = -static_cast<double>(c);
  const double hi = static_cast<double>(spec.patch_cells - 1 - c);
  double worst = 0.0;
  for (const double yaw : spec.angles) {
    const double cos_y = std::cos(yaw);
    const double sin_y = std::sin(yaw);
    for (const double fa : {lo, hi}) {
      for (const double fb : {lo, hi}) {
        worst = std::max(worst, std::abs(cos_y * fa - sin_y * fb));
        worst = std::max(worst, std::abs(sin_y * fa + cos_y * fb));
      }
    }
  }
  return static_cast<int>(std::ceil(worst)) + 1;
}

double patch_height_at(const TerrainPatch& patch, double forward, double left) {
  const int p = patch.patch_cells;
  const int c = p / 2;
  const double ga = forward / patch.resolution + c;
  const double gb = left / patch.resolution + c;
  if (ga < 0.0 || ga > p - 1 || gb < 0.0 || gb > p - 1) {
    throw SpecError("footprint offset outside patch: forward=" + std::to_string(forward) +
                    " left=" + std::to_string(left) + " (patch too small)");
  }
  int a0 = static_cast<int>(std::floor(ga));
  int b0 = static_cast<int>(std::floor(gb));
  if (a0 > p - 2) a0 = p - 2;
  if (b0 > p - 2) b0 = p - 2;
  const double fa = ga - a0;
  const double fb = gb - b0;
  const double h00 = patch.at(a0, b0);
  const double h01 = patch.at(a0, b0 + 1);
  const double h10 = patch.at(a0 + 1, b0);
  const double h11 = patch.at(a0 + 1, b0 + 1);
  const double lo = h00 + (h01 - h00) * fb;
  const double hi = h10 + (h11 - h10) * fb;
  return lo + (hi - lo) * fa;
}

}  // namespace tnav
