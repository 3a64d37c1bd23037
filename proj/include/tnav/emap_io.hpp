#pragma once

#include <string>

#include "tnav/elevation_map.hpp"

namespace tnav {

// EMAP binary format: magic "EMAP", u16 version=1, u32 H, u32 W,
// f64 resolution, f64 origin_x, f64 origin_y, H*W little-endian f64 heights
// (row-major), H*W bytes unknown mask (0/1). Round-trips bit-identically.
void write_emap(const ElevationMap& map, const std::string& path);
ElevationMap read_emap(const std::string& path);

// CSV import for hand-authored fixtures: one row per grid row (first axis),
// comma-separated heights; "nan" or empty fields mark unknown cells.
ElevationMap read_emap_csv(const std::string& path, double resolution, double origin_x = 0.0,
                           double origin_y = 0.0);

}  // namespace tnav
