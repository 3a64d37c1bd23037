#pragma once

#include <cstdint>
#include <string>

#include "tnav/elevation_map.hpp"

namespace tnav {

enum class TerrainKind { Flat, Ramp, Step, BoulderField };

TerrainKind terrain_kind_from_string(const std::string& s);
std::string to_string(TerrainKind k);

// Procedural terrain parameters. Boulder fields are max-combined cosine caps,
// so the surface is continuous with well-defined heights everywhere and the
// total height never exceeds base + max_height.
struct TerrainGenSpec {
  TerrainKind kind = TerrainKind::Flat;
  int boulder_count = 60;
  double radius_lo = 0.08;   // meters
  double radius_hi = 0.30;   // meters
  double max_height = 0.50;  // meters above base
  double ramp_angle = 0.20;  // radians, slope of the ramp kind
  double base = 0.0;         // meters, offset added everywhere

  void validate() const;  // throws SpecError on degenerate ranges
};

// Deterministic in (spec, seed, dims). All heights lie in
// [base, base + max_height].
ElevationMap generate_terrain(const TerrainGenSpec& spec, std::uint64_t seed, int height_cells,
                              int width_cells, double resolution, double origin_x = 0.0,
                              double origin_y = 0.0);

}  // namespace tnav
