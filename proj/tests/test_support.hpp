#pragma once

// Shared fixtures for the test suites.

#include <cmath>
#include <functional>
#include <vector>

#include "tnav/elevation_map.hpp"
#include "tnav/geometry.hpp"

namespace tnav::test {

// Map whose height is fn(x, y) sampled at cell centers. Binary-exact
// resolutions (0.25, 0.5, ...) keep interpolation identities exact.
inline ElevationMap map_from_fn(int h, int w, double res,
                                const std::function<double(double, double)>& fn,
                                double origin_x = 0.0, double origin_y = 0.0) {
  std::vector<double> heights(static_cast<std::size_t>(h) * w);
  for (int m = 0; m < h; ++m) {
    for (int n = 0; n < w; ++n) {
      const double x = origin_x + (m + 0.5) * res;
      const double y = origin_y + (n + 0.5) * res;
      heights[static_cast<std::size_t>(m) * w + n] = fn(x, y);
    }
  }
  return make_elevation_map(h, w, res, origin_x, origin_y, std::move(heights));
}

inline ElevationMap flat_map(int h, int w, double res, double height = 0.0) {
  return map_from_fn(h, w, res, [height](double, double) { return height; });
}

// Plane rising at angle theta along direction alpha.
inline ElevationMap plane_map(int h, int w, double res, double theta, double alpha,
                              double base = 0.5) {
  const double g = std::tan(theta);
  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);
  return map_from_fn(h, w, res,
                     [=](double x, double y) { return base + g * (ca * x + sa * y); });
}

}  // namespace tnav::test
