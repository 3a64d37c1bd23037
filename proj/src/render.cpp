#include "tnav/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tnav/error.hpp"

namespace tnav {

namespace {

void min_max(const float* data, std::size_t n, float& lo, float& hi) {
  lo = data[0];
  hi = data[0];
  for (std::size_t i = 1; i < n; ++i) {
    lo = std::min(lo, data[i]);
    hi = std::max(hi, data[i]);
  }
}

std::ofstream open_binary(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

struct Rgb {
  unsigned char r, g, b;
};

// Blue (low) to red (high) two-point gradient.
Rgb heat_color(double t) {
  const double tt = std::clamp(t, 0.0, 1.0);
  const unsigned char r = static_cast<unsigned char>(std::lround(255.0 * tt));
  return {r, 0, static_cast<unsigned char>(255 - r)};
}

void draw_overlays(std::vector<Rgb>& pixels, int height, int width, double origin_x,
                   double origin_y, double res_x, double res_y, const RenderOverlay& overlay) {
  constexpr Rgb kWhite{255, 255, 255};
  auto put = [&](int m, int n) {
    if (m < 0 || m >= height || n < 0 || n >= width) return;
    pixels[static_cast<std::size_t>(m) * width + n] = kWhite;
  };
  if (overlay.trajectory != nullptr) {
    for (const TrajectoryPoint& p : *overlay.trajectory) {
      const int m = static_cast<int>(std::floor((p.state.x - origin_x) / res_x));
      const int n = static_cast<int>(std::floor((p.state.y - origin_y) / res_y));
      put(m, n);
      put(m + 1, n);
      put(m, n + 1);
    }
  }
  if (overlay.path != nullptr) {
    for (const auto& wp : overlay.path->waypoints) {
      const int m = static_cast<int>(std::floor((wp[0] - origin_x) / res_x));
      const int n = static_cast<int>(std::floor((wp[1] - origin_y) / res_y));
      for (int dm = -1; dm <= 1; ++dm) {
        for (int dn = -1; dn <= 1; ++dn) put(m + dm, n + dn);
      }
    }
  }
}

void write_ppm_field(const std::vector<float>& values, int height, int width, double origin_x,
                     double origin_y, double res, const std::string& path,
                     const RenderOverlay& overlay) {
  if (values.size() != static_cast<std::size_t>(height) * width || values.empty()) {
    throw SpecError("render: value field does not match the stated geometry");
  }
  float lo, hi;
  min_max(values.data(), values.size(), lo, hi);
  const double span = hi > lo ? static_cast<double>(hi) - lo : 1.0;
  std::vector<Rgb> pixels(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    pixels[i] = heat_color((values[i] - lo) / span);
  }
  draw_overlays(pixels, height, width, origin_x, origin_y, res, res, overlay);

  auto out = open_binary(path);
  out << "P6\n" << width << " " << height << "\n255\n";
  for (const Rgb& p : pixels) {
    out.put(static_cast<char>(p.r));
    out.put(static_cast<char>(p.g));
    out.put(static_cast<char>(p.b));
  }
  if (!out) throw IoError("write failure: " + path);
}

}  // namespace

void write_pgm(const std::vector<float>& values, int height, int width, const std::string& path) {
  if (values.size() != static_cast<std::size_t>(height) * width || values.empty()) {
    throw SpecError("render: value field does not match the stated geometry");
  }
  float lo, hi;
  min_max(values.data(), values.size(), lo, hi);
  const double span = hi > lo ? static_cast<double>(hi) - lo : 1.0;
  auto out = open_binary(path);
  out << "P5\n" << width << " " << height << "\n255\n";
  for (const float v : values) {
    const double t = std::clamp((v - lo) / span, 0.0, 1.0);
    out.put(static_cast<char>(std::lround(255.0 * t)));
  }
  if (!out) throw IoError("write failure: " + path);
}

void write_emap_pgm(const ElevationMap& map, const std::string& path) {
  std::vector<float> values(map.heights.begin(), map.heights.end());
  write_pgm(values, map.height_cells, map.width_cells, path);
}

void write_tmap_pgm(const TraversabilityMap& tm, const std::string& path) {
  write_pgm(tm.combined, tm.height_cells, tm.width_cells, path);
}

void write_tmap_ppm(const TraversabilityMap& tm, const std::string& path,
                    const RenderOverlay& overlay) {
  write_ppm_field(tm.combined, tm.height_cells, tm.width_cells, tm.origin_x, tm.origin_y,
                  tm.resolution, path, overlay);
}

void write_emap_ppm(const ElevationMap& map, const std::string& path,
                    const RenderOverlay& overlay) {
  std::vector<float> values(map.heights.begin(), map.heights.end());
  write_ppm_field(values, map.height_cells, map.width_cells, map.origin_x, map.origin_y,
                  map.resolution, path, overlay);
}

}  // namespace tnav
