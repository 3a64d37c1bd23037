#pragma once

#include <string>
#include <vector>

#include "tnav/scenario.hpp"
#include "tnav/tmap.hpp"

namespace tnav {

// Min-max scaled 8-bit grayscale PGM (P5) of a value field. Pixel rows follow
// the first grid axis. Deterministic bytes for identical inputs.
void write_pgm(const std::vector<float>& values, int height, int width, const std::string& path);
void write_emap_pgm(const ElevationMap& map, const std::string& path);
void write_tmap_pgm(const TraversabilityMap& tm, const std::string& path);

// Blue-to-red heatmap PPM (P6) of the combined channel: blue = easily
// traversable, red = challenging. Optional overlays are drawn in white.
struct RenderOverlay {
  const GridPath* path = nullptr;                      // coarse-grid path
  const std::vector<TrajectoryPoint>* trajectory = nullptr;  // world-frame trace
};

void write_tmap_ppm(const TraversabilityMap& tm, const std::string& path,
                    const RenderOverlay& overlay = {});
void write_emap_ppm(const ElevationMap& map, const std::string& path,
                    const RenderOverlay& overlay = {});

}  // namespace tnav
